// Command-line front end: evaluates Zeeman-averaged coupling ratios, the
// medium transfer function, spectral pulse propagation with figures of
// merit, parameter sweeps, global fits, and the time-domain reference
// integrator. Exit codes: 0 success, 2 configuration/input error,
// 3 numerical failure, 4 fit non-convergence.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "slowlight/slowlight.hpp"

namespace {

using namespace slowlight;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitNoConvergence = 4;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    int jobs = 1;
    bool no_fwm = false;
    bool trim_window = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_config) {
    auto* c = cmd->add_option("--config", opts.config_path, "JSON run configuration");
    if (needs_config) c->required();
    cmd->add_option("--out", opts.out_path, "output path");
    cmd->add_option("--jobs", opts.jobs, "max concurrent sweep points")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-fwm", opts.no_fwm, "force the 4WM coupling to zero (eta_eff = 0)");
    cmd->add_flag("--trim-window", opts.trim_window,
                  "trim propagated traces back to the synthesis window");
}

std::ostream& out_stream(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw config_error("cannot open for writing: " + path);
    return file;
}

// ---------------------------------------------------------------- eta ----

int cmd_eta(const std::string& isotope_name, const CommonOpts& opts) {
    const IsotopeSpec iso = isotopes::by_name(isotope_name);
    IdlerDetunings det = default_idler_detunings(iso);
    if (!opts.config_path.empty()) {
        const RunConfig cfg = load_run_config(opts.config_path);
        if (cfg.isotope.name == iso.name) det = cfg.idler_detunings;
    }

    const int fg = static_cast<int>(iso.f_ground_lower());
    json per_mf = json::object();
    std::printf("isotope %s, idler detunings (lower, upper) = (%.6g, %.6g) rad/s\n",
                isotopes::to_string(iso.name).c_str(), det.lower, det.upper);
    std::printf("%6s  %14s\n", "m_F", "eta");
    for (int m = -fg; m <= fg; ++m) {
        const double v = eta_mf(iso, m, det);
        std::printf("%+6d  %14.10f\n", m, v);
        per_mf[std::to_string(m)] = v;
    }
    const double eff = eta_eff(iso, det);
    std::printf("eta_eff = %.10f\n", eff);

    if (!opts.out_path.empty()) {
        io::write_json(opts.out_path, json{{"isotope", isotopes::to_string(iso.name)},
                                           {"idler_detuning_lower_rad_s", det.lower},
                                           {"idler_detuning_upper_rad_s", det.upper},
                                           {"eta_mf", per_mf},
                                           {"eta_eff", eff}});
    }
    return 0;
}

// ----------------------------------------------------------- transfer ----

int cmd_transfer(const CommonOpts& opts) {
    RunConfig cfg = load_run_config(opts.config_path);
    if (!cfg.transfer_grid)
        throw config_error("transfer: config needs a 'transfer_grid' section");
    if (opts.no_fwm) cfg.medium.eta_eff = 0.0;

    const TransferGridSpec& gs = *cfg.transfer_grid;
    std::vector<double> omegas;
    omegas.reserve(gs.points);
    if (gs.points == 1) {
        omegas.push_back(gs.omega_min);
    } else {
        const double h = (gs.omega_max - gs.omega_min) / (gs.points - 1);
        for (int i = 0; i < gs.points; ++i) omegas.push_back(gs.omega_min + h * i);
    }
    const std::vector<TransferSample> samples = transfer_grid(omegas, cfg.medium);

    std::ofstream file;
    std::ostream& os = out_stream(opts.out_path, file);
    os << "omega_rad_s,re_T,im_T,log_mag,phase_rad,intensity_transmission\n";
    for (const TransferSample& s : samples) {
        const double re = s.value ? s.value->real() : std::nan("");
        const double im = s.value ? s.value->imag() : std::nan("");
        os << io::format_float(s.omega) << ',' << io::format_float(re) << ','
           << io::format_float(im) << ',' << io::format_float(s.log_magnitude) << ','
           << io::format_float(s.phase) << ','
           << io::format_float(std::exp(2.0 * s.log_magnitude)) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------- propagate ----

io::MetricsReport make_report(const TimeTrace& output, const TimeTrace& input,
                              const MediumParams& params) {
    io::MetricsReport rep;
    rep.efficiency = efficiency(output, input);
    rep.delay_s = delay(output, input);
    rep.fwhm_s = intensity_fwhm(output);
    rep.fwm_gain = fwm_gain(params, input);
    rep.modal_capacity = modal_capacity(params.optical_depth);
    try {
        rep.dbp = delay_bandwidth_product(output, input);
        rep.dbp_valid = true;
    } catch (const config_error&) {
        rep.dbp_valid = false; // multi-lobed output: see per_pulse
    }
    auto segments = split_pulses(output);
    for (const auto& [seg, pm] : segments) rep.per_pulse.push_back(pm);
    return rep;
}

json report_json(const io::MetricsReport& rep, const TimeTrace& output, const TimeTrace& input) {
    json j = io::to_json(rep);
    // per-pulse delays when the input splits into the same number of lobes
    auto in_segs = split_pulses(input);
    if (in_segs.size() == rep.per_pulse.size() && in_segs.size() > 1) {
        for (std::size_t k = 0; k < in_segs.size(); ++k)
            j["per_pulse"][k]["delay_s"] = rep.per_pulse[k].com_time - in_segs[k].second.com_time;
    }
    (void)output;
    (void)input;
    return j;
}

int cmd_propagate(const CommonOpts& opts, const std::string& metrics_path) {
    RunConfig cfg = load_run_config(opts.config_path);
    if (opts.no_fwm) cfg.medium.eta_eff = 0.0;
    if (!(cfg.window > 0.0) || !(cfg.dt > 0.0))
        throw config_error("propagate: config needs 'pulse', 'window' and 'dt'");

    const TimeTrace input = synthesize(cfg.pulse, cfg.window, cfg.dt);
    TimeTrace output = propagate(input, cfg.medium);
    const io::MetricsReport rep = make_report(output, input, cfg.medium);
    if (opts.trim_window) output = trim_to_window(output, cfg.window);

    const std::string trace_path =
        opts.out_path.empty() ? "slowlight_output.csv" : opts.out_path;
    io::write_trace_csv(trace_path, output);

    const json j = report_json(rep, output, input);
    if (metrics_path.empty())
        std::cout << j.dump(2) << '\n';
    else
        io::write_json(metrics_path, j);
    std::fprintf(stderr, "note: %s\n", fwm_strength_convention_note().c_str());
    return 0;
}

// -------------------------------------------------------------- sweep ----

struct SweepRow {
    double axis = 0.0;
    bool ok = false;
    bool dbp_ok = false;
    double eff = 0.0, delay_s = 0.0, fwhm_s = 0.0, dbp = 0.0, gain = 0.0;
    std::string error;
};

int cmd_sweep(const CommonOpts& opts) {
    RunConfig cfg = load_run_config(opts.config_path);
    if (opts.no_fwm) cfg.medium.eta_eff = 0.0;
    if (!cfg.sweep) throw config_error("sweep: config needs a 'sweep' section");
    if (!(cfg.window > 0.0) || !(cfg.dt > 0.0))
        throw config_error("sweep: config needs 'pulse', 'window' and 'dt'");

    const TimeTrace input = synthesize(cfg.pulse, cfg.window, cfg.dt);
    const std::vector<double> axis = sweep_axis_values(*cfg.sweep);
    std::vector<SweepRow> rows(axis.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= axis.size()) return;
            SweepRow& row = rows[i];
            row.axis = axis[i];
            try {
                const MediumParams p = apply_sweep_value(cfg.medium, cfg.sweep->field, axis[i]);
                const TimeTrace out = propagate(input, p);
                row.eff = efficiency(out, input);
                row.delay_s = delay(out, input);
                row.fwhm_s = intensity_fwhm(out);
                row.gain = fwm_gain(p, input);
                try {
                    row.dbp = delay_bandwidth_product(out, input);
                    row.dbp_ok = true;
                } catch (const config_error&) {
                    row.dbp_ok = false;
                }
                row.ok = true;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(axis.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::ofstream file;
    std::ostream& os = out_stream(opts.out_path, file);
    os << "axis,efficiency,delay_s,fwhm_s,dbp,fwm_gain,delay_x_eff\n";
    std::size_t failed = 0;
    for (const SweepRow& row : rows) {
        if (!row.ok) {
            ++failed;
            std::fprintf(stderr, "sweep point %s failed: %s\n",
                         io::format_float(row.axis).c_str(), row.error.c_str());
            os << io::format_float(row.axis) << ",nan,nan,nan,nan,nan,nan\n";
            continue;
        }
        os << io::format_float(row.axis) << ',' << io::format_float(row.eff) << ','
           << io::format_float(row.delay_s) << ',' << io::format_float(row.fwhm_s) << ','
           << (row.dbp_ok ? io::format_float(row.dbp) : "nan") << ','
           << io::format_float(row.gain) << ','
           << io::format_float(row.delay_s * row.eff) << '\n';
    }
    if (failed == rows.size())
        throw numerical_error("sweep: all " + std::to_string(failed) + " points failed");
    return 0;
}

// ---------------------------------------------------------------- fit ----

int cmd_fit(const CommonOpts& opts, const std::string& data_path) {
    RunConfig cfg = load_run_config(opts.config_path);
    if (opts.no_fwm) cfg.medium.eta_eff = 0.0;
    if (!(cfg.window > 0.0) || !(cfg.dt > 0.0))
        throw config_error("fit: config needs 'pulse', 'window' and 'dt'");

    const std::vector<ObservationRow> rows = io::read_observations_csv(data_path);
    FitConfig fc;
    fc.gamma_ge = cfg.medium.gamma_ge;
    fc.delta = cfg.medium.delta;
    fc.eta_eff = cfg.medium.eta_eff;
    fc.pulse = cfg.pulse;
    fc.window = cfg.window;
    fc.dt = cfg.dt;

    const FitResult result = fit_global(rows, fc);
    const json j = io::to_json(result);
    std::cout << j.dump(2) << '\n';
    if (!opts.out_path.empty()) io::write_json(opts.out_path, j);
    return result.converged ? 0 : kExitNoConvergence;
}

// ------------------------------------------------------------- oracle ----

int cmd_oracle(const CommonOpts& opts, const std::string& signal_path,
               const std::string& idler_path, const std::string& report_path,
               const std::string& input_path) {
    RunConfig cfg = load_run_config(opts.config_path);
    if (opts.no_fwm) cfg.medium.eta_eff = 0.0;
    if (!cfg.oracle_grid) throw config_error("oracle: config needs an 'oracle_grid' section");

    TimeTrace input;
    if (!input_path.empty()) {
        input = io::read_trace_csv(input_path);
    } else {
        if (!(cfg.window > 0.0) || !(cfg.dt > 0.0))
            throw config_error("oracle: config needs 'pulse', 'window' and 'dt' (or --input)");
        input = synthesize(cfg.pulse, cfg.window, cfg.dt);
    }

    const OracleResult res = integrate(input, cfg.medium, *cfg.oracle_grid);
    io::write_trace_csv(signal_path, res.signal_out);
    io::write_trace_csv(idler_path, res.idler_out);

    // spectral path on the same input, compared over the common grid
    const TimeTrace spectral = propagate(input, cfg.medium);
    const std::size_t m = std::min(res.signal_out.samples.size(), spectral.samples.size());
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        num += std::norm(res.signal_out.samples[k] - spectral.samples[k]);
        den += std::norm(spectral.samples[k]);
    }
    const double rel_l2 = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);

    const ConvergenceReport conv = convergence_report(input, cfg.medium, *cfg.oracle_grid);
    json levels = json::array();
    for (const ConvergenceLevel& l : conv.levels)
        levels.push_back({{"nz", l.nz}, {"dt_s", l.dt}, {"l2_diff_from_prev", l.l2_diff_from_prev}});
    if (!conv.monotone)
        std::fprintf(stderr, "warning: oracle refinement differences are not monotone\n");

    const json j{{"rel_l2_signal_vs_spectral", rel_l2},
                 {"signal_energy", res.signal_out.energy()},
                 {"idler_energy", res.idler_out.energy()},
                 {"convergence", {{"levels", levels}, {"monotone", conv.monotone}}}};
    if (report_path.empty())
        std::cout << j.dump(2) << '\n';
    else
        io::write_json(report_path, j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"EIT-4WM slow-light simulator"};
    app.require_subcommand(1);

    CommonOpts eta_opts, transfer_opts, prop_opts, sweep_opts, fit_opts, oracle_opts;
    std::string isotope_name, metrics_path, data_path;
    std::string signal_path = "oracle_signal.csv";
    std::string idler_path = "oracle_idler.csv";
    std::string report_path, oracle_input_path;

    CLI::App* eta = app.add_subcommand("eta", "Zeeman-averaged coupling ratio table");
    eta->add_option("isotope", isotope_name, "rb85 or rb87")->required();
    add_common(eta, eta_opts, false);

    CLI::App* transfer = app.add_subcommand("transfer", "evaluate the transfer function on a grid");
    add_common(transfer, transfer_opts, true);

    CLI::App* propagate = app.add_subcommand("propagate", "synthesize, propagate, report metrics");
    add_common(propagate, prop_opts, true);
    propagate->add_option("--metrics", metrics_path, "metrics JSON path (default: stdout)");

    CLI::App* sweep = app.add_subcommand("sweep", "propagate over a parameter sweep");
    add_common(sweep, sweep_opts, true);

    CLI::App* fit = app.add_subcommand("fit", "global fit of gamma_gs and the power calibration");
    add_common(fit, fit_opts, true);
    fit->add_option("--data", data_path, "observations CSV")->required();

    CLI::App* oracle = app.add_subcommand("oracle", "time-domain integrator + spectral comparison");
    add_common(oracle, oracle_opts, true);
    oracle->add_option("--signal-out", signal_path, "signal trace CSV path");
    oracle->add_option("--idler-out", idler_path, "idler trace CSV path");
    oracle->add_option("--report", report_path, "comparison report JSON path (default: stdout)");
    oracle->add_option("--input", oracle_input_path, "input trace CSV (instead of synthesis)");

    try {
        app.parse(argc, argv);
        if (eta->parsed()) return cmd_eta(isotope_name, eta_opts);
        if (transfer->parsed()) return cmd_transfer(transfer_opts);
        if (propagate->parsed()) return cmd_propagate(prop_opts, metrics_path);
        if (sweep->parsed()) return cmd_sweep(sweep_opts);
        if (fit->parsed()) return cmd_fit(fit_opts, data_path);
        if (oracle->parsed())
            return cmd_oracle(oracle_opts, signal_path, idler_path, report_path, oracle_input_path);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    } catch (const numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const config_error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
    return 0;
}
