#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "slowlight/errors.hpp"
#include "slowlight/fitting.hpp"
#include "slowlight/metrics.hpp"
#include "slowlight/trace.hpp"

// CSV / JSON serialization. All floats are emitted with 17 significant
// digits so identical runs produce byte-identical files.

namespace slowlight::io {

inline std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// --- shared trace format: time_s,re,im ---

inline void write_trace_csv(std::ostream& os, const TimeTrace& tr) {
    os << "time_s,re,im\n";
    for (std::size_t k = 0; k < tr.samples.size(); ++k)
        os << format_float(tr.time_at(k)) << ',' << format_float(tr.samples[k].real()) << ','
           << format_float(tr.samples[k].imag()) << '\n';
}

inline void write_trace_csv(const std::string& path, const TimeTrace& tr) {
    std::ofstream os(path);
    if (!os) throw config_error("cannot open for writing: " + path);
    write_trace_csv(os, tr);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

inline double to_double(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("bad numeric field '" + s + "' in " + context);
    }
}

} // namespace detail

inline TimeTrace read_trace_csv(std::istream& is, const std::string& context = "trace csv") {
    std::string line;
    if (!std::getline(is, line)) throw config_error(context + ": empty file");
    if (line.rfind("time_s,re,im", 0) != 0)
        throw config_error(context + ": expected header 'time_s,re,im'");

    std::vector<double> times;
    std::vector<complexd> samples;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 3) throw config_error(context + ": expected 3 columns");
        times.push_back(detail::to_double(fields[0], context));
        samples.emplace_back(detail::to_double(fields[1], context),
                             detail::to_double(fields[2], context));
    }
    if (times.size() < 8) throw config_error(context + ": need at least 8 samples");
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw config_error(context + ": times must be strictly increasing");
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double step = times[k] - times[k - 1];
        if (!(step > 0.0) || std::abs(step - dt) > 1e-6 * dt)
            throw config_error(context + ": non-uniform time grid at row " + std::to_string(k));
    }
    TimeTrace tr{times[0], dt, std::move(samples)};
    tr.validate();
    return tr;
}

inline TimeTrace read_trace_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open trace csv: " + path);
    return read_trace_csv(is, path);
}

// --- fit dataset: control_power,optical_depth,efficiency,delay_s[,weight] ---

inline std::vector<ObservationRow> read_observations_csv(std::istream& is,
                                                         const std::string& context = "fit csv") {
    std::string line;
    if (!std::getline(is, line)) throw config_error(context + ": empty file");
    const auto header = detail::split_csv_line(line);
    const bool with_weight = header.size() == 5 && header[4] == "weight";
    if (!(header.size() == 4 || with_weight) || header[0] != "control_power" ||
        header[1] != "optical_depth" || header[2] != "efficiency" || header[3] != "delay_s")
        throw config_error(context +
                           ": expected header 'control_power,optical_depth,efficiency,delay_s[,weight]'");

    std::vector<ObservationRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size())
            throw config_error(context + ": wrong column count at data row " +
                               std::to_string(rows.size() + 1));
        ObservationRow row;
        row.control_power = detail::to_double(fields[0], context);
        row.optical_depth = detail::to_double(fields[1], context);
        row.efficiency = detail::to_double(fields[2], context);
        row.delay = detail::to_double(fields[3], context);
        if (with_weight) row.weight = detail::to_double(fields[4], context);
        row.validate();
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<ObservationRow> read_observations_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open fit csv: " + path);
    return read_observations_csv(is, path);
}

// --- metrics report ---

struct MetricsReport {
    double efficiency = 0.0;
    double delay_s = 0.0;
    double fwhm_s = 0.0;
    double dbp = 0.0;
    bool dbp_valid = false; // false for multi-lobed outputs
    double fwm_gain = 1.0;
    double modal_capacity = 0.0;
    std::vector<PulseMetrics> per_pulse;
};

inline nlohmann::json to_json(const PulseMetrics& m) {
    return {{"energy", m.energy},
            {"com_time_s", m.com_time},
            {"fwhm_s", m.fwhm},
            {"peak_time_s", m.peak_time}};
}

inline nlohmann::json to_json(const MetricsReport& r) {
    nlohmann::json j{{"efficiency", r.efficiency},
                     {"delay_s", r.delay_s},
                     {"fwhm_s", r.fwhm_s},
                     {"fwm_gain", r.fwm_gain},
                     {"modal_capacity", r.modal_capacity}};
    if (r.dbp_valid)
        j["dbp"] = r.dbp;
    else
        j["dbp"] = nullptr;
    j["per_pulse"] = nlohmann::json::array();
    for (const PulseMetrics& m : r.per_pulse) j["per_pulse"].push_back(to_json(m));
    return j;
}

inline nlohmann::json to_json(const FitResult& r) {
    return {{"gamma_gs_rad_s", r.gamma_gs},
            {"calibration_k", r.calibration_k},
            {"residual_rms", r.residual_rms},
            {"iterations", r.iterations},
            {"converged", r.converged}};
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream os(path);
    if (!os) throw config_error("cannot open for writing: " + path);
    os << j.dump(2) << '\n';
}

} // namespace slowlight::io
