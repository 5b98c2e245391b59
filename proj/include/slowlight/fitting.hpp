#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "slowlight/errors.hpp"
#include "slowlight/metrics.hpp"
#include "slowlight/propagation.hpp"
#include "slowlight/trace.hpp"

// Global fit of the ground-state decay rate gamma_gs and the calibration
// constant k relating |Omega|^2 to the measured control power, against
// observed (power, optical depth, efficiency, delay) rows. Both parameters
// are optimized in log space (positivity without constraints) by a
// deterministic Nelder-Mead simplex started from the best point of a
// log-spaced coarse grid.

namespace slowlight {

struct ObservationRow {
    double control_power = 0.0; // arbitrary detector units, >= 0
    double optical_depth = 0.0; // > 0
    double efficiency = 0.0;    // >= 0
    double delay = 0.0;         // [s]
    double weight = 1.0;        // > 0

    void validate() const {
        auto finite = [](double v) { return std::isfinite(v); };
        if (!finite(control_power) || !finite(optical_depth) || !finite(efficiency) ||
            !finite(delay) || !finite(weight))
            throw config_error("observation row: non-finite field");
        if (control_power < 0.0) throw config_error("observation row: control_power < 0");
        if (!(optical_depth > 0.0)) throw config_error("observation row: optical_depth <= 0");
        if (efficiency < 0.0) throw config_error("observation row: efficiency < 0");
        if (!(weight > 0.0)) throw config_error("observation row: weight <= 0");
    }
};

struct FitResult {
    double gamma_gs = 0.0;      // [rad/s]
    double calibration_k = 0.0; // |Omega|^2 = k * control_power  [rad^2/s^2 per power unit]
    double residual_rms = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Fixed (non-fitted) model configuration shared by all rows.
struct FitConfig {
    double gamma_ge = 0.0; // [rad/s]
    double delta = 0.0;    // [rad/s]
    double eta_eff = 0.0;
    PulseSpec pulse;
    double window = 0.0; // synthesis window [s]
    double dt = 0.0;     // synthesis sample interval [s]
    int max_iterations = 400;

    void validate() const {
        if (!(gamma_ge > 0.0)) throw config_error("fit config: gamma_ge must be > 0");
        if (eta_eff != 0.0 && delta == 0.0)
            throw singular_parameter_error("fit config: delta = 0 with nonzero eta_eff");
        pulse.validate();
        if (!(window > 0.0) || !(dt > 0.0)) throw config_error("fit config: window and dt must be > 0");
    }
};

namespace detail {

inline MediumParams row_params(const ObservationRow& row, double gamma_gs, double k,
                               const FitConfig& cfg) {
    MediumParams p;
    p.optical_depth = row.optical_depth;
    p.gamma_ge = cfg.gamma_ge;
    p.gamma_gs = gamma_gs;
    p.delta = cfg.delta;
    p.omega = complexd{std::sqrt(k * row.control_power), 0.0};
    p.eta_eff = cfg.eta_eff;
    return p;
}

// fixed-shape deterministic Nelder-Mead in n=2 dimensions
struct SimplexResult {
    std::array<double, 2> x{};
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

inline SimplexResult nelder_mead_2d(const std::function<double(const std::array<double, 2>&)>& fn,
                                    std::array<double, 2> start, double step, int max_iter) {
    using Point = std::array<double, 2>;
    struct Vertex {
        Point x;
        double f;
    };
    std::array<Vertex, 3> simplex;
    simplex[0] = {start, fn(start)};
    for (int d = 0; d < 2; ++d) {
        Point p = start;
        p[d] += step;
        simplex[d + 1] = {p, fn(p)};
    }
    auto order = [&] {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    };
    order();

    SimplexResult result;
    int it = 0;
    for (; it < max_iter; ++it) {
        const double spread = std::abs(simplex[2].f - simplex[0].f);
        const double size = std::max(std::abs(simplex[1].x[0] - simplex[0].x[0]) +
                                         std::abs(simplex[1].x[1] - simplex[0].x[1]),
                                     std::abs(simplex[2].x[0] - simplex[0].x[0]) +
                                         std::abs(simplex[2].x[1] - simplex[0].x[1]));
        if (size < 1e-10 && spread < 1e-14 * (1.0 + std::abs(simplex[0].f))) {
            result.converged = true;
            break;
        }
        const Point centroid{(simplex[0].x[0] + simplex[1].x[0]) / 2.0,
                             (simplex[0].x[1] + simplex[1].x[1]) / 2.0};
        auto at = [&](double coef) {
            Point p{centroid[0] + coef * (centroid[0] - simplex[2].x[0]),
                    centroid[1] + coef * (centroid[1] - simplex[2].x[1])};
            return Vertex{p, fn(p)};
        };
        Vertex refl = at(1.0);
        if (refl.f < simplex[0].f) {
            Vertex expa = at(2.0);
            simplex[2] = (expa.f < refl.f) ? expa : refl;
        } else if (refl.f < simplex[1].f) {
            simplex[2] = refl;
        } else {
            Vertex contr = (refl.f < simplex[2].f) ? at(0.5) : at(-0.5);
            if (contr.f < std::min(refl.f, simplex[2].f)) {
                simplex[2] = contr;
            } else {
                // shrink toward the best vertex
                for (int v = 1; v < 3; ++v) {
                    for (int d = 0; d < 2; ++d)
                        simplex[v].x[d] = simplex[0].x[d] + 0.5 * (simplex[v].x[d] - simplex[0].x[d]);
                    simplex[v].f = fn(simplex[v].x);
                }
            }
        }
        order();
    }
    result.x = simplex[0].x;
    result.f = simplex[0].f;
    result.iterations = it;
    return result;
}

} // namespace detail

// Model prediction for one observation row: (efficiency, COM delay).
inline std::pair<double, double> predict(const ObservationRow& row, double gamma_gs, double k,
                                         const FitConfig& cfg) {
    row.validate();
    cfg.validate();
    if (gamma_gs < 0.0) throw config_error("predict: gamma_gs must be >= 0");
    if (!(k > 0.0)) throw config_error("predict: calibration k must be > 0");
    const TimeTrace input = synthesize(cfg.pulse, cfg.window, cfg.dt);
    const MediumParams p = detail::row_params(row, gamma_gs, k, cfg);
    try {
        const TimeTrace out = propagate(input, p);
        return {efficiency(out, input), delay(out, input)};
    } catch (const error& e) {
        throw numerical_error("predict: row with power " + std::to_string(row.control_power) +
                              ", OD " + std::to_string(row.optical_depth) + ": " + e.what());
    }
}

inline FitResult fit_global(const std::vector<ObservationRow>& rows, const FitConfig& cfg) {
    cfg.validate();
    if (rows.size() < 4) throw config_error("fit_global: need at least 4 rows");
    for (const ObservationRow& r : rows) r.validate();
    double pmin = rows.front().control_power, pmax = pmin;
    for (const ObservationRow& r : rows) {
        pmin = std::min(pmin, r.control_power);
        pmax = std::max(pmax, r.control_power);
    }
    if (!(pmax > pmin) || !(pmin > 0.0))
        throw config_error("fit_global: ill-posed dataset (need >= 2 distinct positive powers)");

    const TimeTrace input = synthesize(cfg.pulse, cfg.window, cfg.dt);
    const double t_ref = cfg.pulse.width; // makes the delay residual dimensionless

    auto objective_at = [&](double gamma_gs, double k) {
        double obj = 0.0;
        for (const ObservationRow& row : rows) {
            const MediumParams p = detail::row_params(row, gamma_gs, k, cfg);
            double eff, del;
            try {
                const TimeTrace out = propagate(input, p);
                eff = efficiency(out, input);
                del = delay(out, input);
            } catch (const error&) {
                return 1e9; // failed propagation: hopeless parameter point
            }
            const double de = eff - row.efficiency;
            const double dd = (del - row.delay) / t_ref;
            obj += row.weight * (de * de + dd * dd);
        }
        return obj;
    };
    // log-space coordinates; gamma_gs bounded below at 2*pi*1 Hz
    constexpr double gamma_floor = 2.0 * std::numbers::pi;
    auto objective = [&](const std::array<double, 2>& x) {
        return objective_at(gamma_floor + std::exp(x[0]), std::exp(x[1]));
    };

    // coarse log grid seed: gamma_gs over [2pi*1 Hz, 2pi*1 MHz], k spanning
    // control Rabi frequencies from 1e-2 to 10 gamma_ge at the median power
    std::vector<double> powers;
    powers.reserve(rows.size());
    for (const ObservationRow& r : rows) powers.push_back(r.control_power);
    std::sort(powers.begin(), powers.end());
    const double p_med = powers[powers.size() / 2];

    const double g_lo = std::log(2.0 * std::numbers::pi * 1.0);
    const double g_hi = std::log(2.0 * std::numbers::pi * 1e6);
    const double k_lo = std::log(std::pow(1e-2 * cfg.gamma_ge, 2) / p_med);
    const double k_hi = std::log(std::pow(10.0 * cfg.gamma_ge, 2) / p_med);

    constexpr int grid_n = 9;
    std::array<double, 2> best{};
    double best_f = std::numeric_limits<double>::infinity();
    for (int ig = 0; ig < grid_n; ++ig) {
        for (int ik = 0; ik < grid_n; ++ik) {
            const std::array<double, 2> x{
                g_lo + (g_hi - g_lo) * ig / (grid_n - 1),
                k_lo + (k_hi - k_lo) * ik / (grid_n - 1)};
            const double f = objective(x);
            if (f < best_f) {
                best_f = f;
                best = x;
            }
        }
    }

    detail::SimplexResult sr =
        detail::nelder_mead_2d(objective, best, 0.35, cfg.max_iterations);

    FitResult result;
    result.gamma_gs = gamma_floor + std::exp(sr.x[0]);
    result.calibration_k = std::exp(sr.x[1]);
    result.residual_rms = std::sqrt(sr.f / (2.0 * static_cast<double>(rows.size())));
    result.iterations = sr.iterations;
    result.converged = sr.converged;
    return result;
}

} // namespace slowlight
