#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "slowlight/errors.hpp"
#include "slowlight/medium.hpp"
#include "slowlight/oracle.hpp"
#include "slowlight/trace.hpp"
#include "slowlight/units.hpp"

// JSON run configuration. Every dimensioned quantity is a string with a
// mandatory unit suffix (see units.hpp); dimensionless quantities are plain
// numbers. Medium fields left out fall back to the selected isotope's
// constants.

namespace slowlight {

struct TransferGridSpec {
    double omega_min = 0.0; // [rad/s]
    double omega_max = 0.0;
    int points = 0;
};

enum class SweepScale { Linear, Log };

struct SweepSpec {
    std::string field; // optical_depth | omega | gamma_gs | gamma_ge | delta | eta_eff
    double start = 0.0; // internal units of the field
    double stop = 0.0;
    int count = 0;
    SweepScale scale = SweepScale::Linear;
};

struct RunConfig {
    IsotopeSpec isotope = isotopes::rb85();
    MediumParams medium;
    IdlerDetunings idler_detunings{};
    PulseSpec pulse;
    double window = 0.0; // synthesis window [s]
    double dt = 0.0;     // synthesis sample interval [s]
    std::optional<GridConfig> oracle_grid;
    std::optional<TransferGridSpec> transfer_grid;
    std::optional<SweepSpec> sweep;
};

namespace config_detail {

using nlohmann::json;

inline double angular_freq(const json& j, const std::string& key) {
    if (!j.at(key).is_string())
        throw config_error("config: '" + key + "' must be a unit-suffixed string");
    return units::parse_angular_frequency(j.at(key).get<std::string>());
}

inline double time_s(const json& j, const std::string& key) {
    if (!j.at(key).is_string())
        throw config_error("config: '" + key + "' must be a unit-suffixed string");
    return units::parse_time(j.at(key).get<std::string>());
}

inline double number(const json& j, const std::string& key) {
    if (!j.at(key).is_number())
        throw config_error("config: '" + key + "' must be a plain number");
    return j.at(key).get<double>();
}

inline bool is_frequency_field(const std::string& field) {
    return field == "omega" || field == "gamma_gs" || field == "gamma_ge" || field == "delta";
}

} // namespace config_detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
    using namespace config_detail;
    RunConfig cfg;

    if (j.contains("isotope")) cfg.isotope = isotopes::by_name(j.at("isotope").get<std::string>());
    cfg.idler_detunings = default_idler_detunings(cfg.isotope);
    if (j.contains("idler_detunings")) {
        const auto& d = j.at("idler_detunings");
        if (d.contains("lower")) cfg.idler_detunings.lower = angular_freq(d, "lower");
        if (d.contains("upper")) cfg.idler_detunings.upper = angular_freq(d, "upper");
    }

    cfg.medium.gamma_ge = cfg.isotope.gamma_ge;
    cfg.medium.delta = cfg.isotope.ground_splitting;
    cfg.medium.eta_eff = eta_eff(cfg.isotope, cfg.idler_detunings);
    if (j.contains("medium")) {
        const auto& m = j.at("medium");
        if (m.contains("optical_depth")) cfg.medium.optical_depth = number(m, "optical_depth");
        if (m.contains("gamma_ge")) cfg.medium.gamma_ge = angular_freq(m, "gamma_ge");
        if (m.contains("gamma_gs")) cfg.medium.gamma_gs = angular_freq(m, "gamma_gs");
        if (m.contains("delta")) cfg.medium.delta = angular_freq(m, "delta");
        if (m.contains("eta_eff")) cfg.medium.eta_eff = number(m, "eta_eff");
        if (m.contains("omega")) {
            const double mag = angular_freq(m, "omega");
            const double phase = m.contains("omega_phase_rad") ? number(m, "omega_phase_rad") : 0.0;
            cfg.medium.omega = complexd{mag * std::cos(phase), mag * std::sin(phase)};
        }
    }
    cfg.medium.validate();

    if (j.contains("pulse")) {
        const auto& p = j.at("pulse");
        cfg.pulse.shape = pulse_shape_from_string(p.at("shape").get<std::string>());
        cfg.pulse.width = time_s(p, "width");
        if (p.contains("separation")) cfg.pulse.separation = time_s(p, "separation");
        if (p.contains("amplitude")) cfg.pulse.amplitude = number(p, "amplitude");
        if (p.contains("center"))
            cfg.pulse.center = time_s(p, "center");
        else
            cfg.pulse.center = 2.0 * (cfg.pulse.width + cfg.pulse.separation);
    }
    if (j.contains("window")) cfg.window = time_s(j, "window");
    if (j.contains("dt")) cfg.dt = time_s(j, "dt");

    if (j.contains("oracle_grid")) {
        const auto& g = j.at("oracle_grid");
        GridConfig gc;
        gc.nz = static_cast<int>(number(g, "nz"));
        gc.dt = time_s(g, "dt");
        if (g.contains("window")) gc.window = time_s(g, "window");
        cfg.oracle_grid = gc;
    }

    if (j.contains("transfer_grid")) {
        const auto& t = j.at("transfer_grid");
        TransferGridSpec ts;
        ts.omega_min = angular_freq(t, "omega_min");
        ts.omega_max = angular_freq(t, "omega_max");
        ts.points = static_cast<int>(number(t, "points"));
        if (ts.points < 1) throw config_error("config: transfer_grid.points must be >= 1");
        if (ts.points > 1 && !(ts.omega_max > ts.omega_min))
            throw config_error("config: transfer_grid needs omega_max > omega_min");
        cfg.transfer_grid = ts;
    }

    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        SweepSpec sw;
        sw.field = s.at("field").get<std::string>();
        const bool freq = is_frequency_field(sw.field);
        if (sw.field != "optical_depth" && sw.field != "eta_eff" && !freq)
            throw config_error("config: unknown sweep field '" + sw.field + "'");
        sw.start = freq ? angular_freq(s, "start") : number(s, "start");
        sw.stop = freq ? angular_freq(s, "stop") : number(s, "stop");
        sw.count = static_cast<int>(number(s, "count"));
        if (sw.count < 1) throw config_error("config: sweep.count must be >= 1");
        if (s.contains("scale")) {
            const std::string sc = s.at("scale").get<std::string>();
            if (sc == "linear")
                sw.scale = SweepScale::Linear;
            else if (sc == "log")
                sw.scale = SweepScale::Log;
            else
                throw config_error("config: sweep.scale must be 'linear' or 'log'");
        }
        if (sw.scale == SweepScale::Log && !(sw.start > 0.0 && sw.stop > 0.0))
            throw config_error("config: log sweep needs positive start/stop");
        cfg.sweep = sw;
    }
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config: " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("config parse error in " + path + ": " + e.what());
    }
    try {
        return parse_run_config(j);
    } catch (const nlohmann::json::exception& e) {
        throw config_error("config error in " + path + ": " + e.what());
    }
}

// sweep axis application
inline MediumParams apply_sweep_value(const MediumParams& base, const std::string& field,
                                      double value) {
    MediumParams p = base;
    if (field == "optical_depth")
        p.optical_depth = value;
    else if (field == "omega")
        p.omega = complexd{value, 0.0};
    else if (field == "gamma_gs")
        p.gamma_gs = value;
    else if (field == "gamma_ge")
        p.gamma_ge = value;
    else if (field == "delta")
        p.delta = value;
    else if (field == "eta_eff")
        p.eta_eff = value;
    else
        throw config_error("unknown sweep field '" + field + "'");
    return p;
}

inline std::vector<double> sweep_axis_values(const SweepSpec& sw) {
    std::vector<double> values;
    values.reserve(sw.count);
    if (sw.count == 1) {
        values.push_back(sw.start);
        return values;
    }
    for (int i = 0; i < sw.count; ++i) {
        const double f = static_cast<double>(i) / (sw.count - 1);
        if (sw.scale == SweepScale::Linear)
            values.push_back(sw.start + f * (sw.stop - sw.start));
        else
            values.push_back(std::exp(std::log(sw.start) + f * (std::log(sw.stop) - std::log(sw.start))));
    }
    return values;
}

} // namespace slowlight
