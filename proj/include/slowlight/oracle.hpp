#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "slowlight/errors.hpp"
#include "slowlight/medium.hpp"
#include "slowlight/trace.hpp"

// Time-domain integrator of the linearized EIT-4WM equations of motion in
// the co-moving frame over normalized length L = 1,
//
//   dt b_ge = -g_ge b_ge + i G a_s + i Om  b_gs
//   dt b_gs = -g_gs b_gs + i eps G a_i + i Om* b_ge
//   dz a_s  =  i G b_ge
//   dz a_i  = -i eps G b_gs          (a_i is the conjugated idler envelope)
//
// with collective coupling G^2 = D g_ge / 2, zero initial polarizations and
// no injected idler. Classical RK4 in time per spatial node, trapezoidal
// accumulation of the field integrals in z. This path shares nothing with
// the spectral transfer-function evaluation and is the reference the
// spectral path is checked against.

namespace slowlight {

struct GridConfig {
    int nz = 100;        // spatial slices over L = 1
    double dt = 0.0;     // integrator step [s]; input samples are subdivided to reach it
    double window = 0.0; // optional extension of the integration window [s]

    void validate(const MediumParams& p) const {
        if (nz < 50) throw config_error("oracle grid: nz must be >= 50");
        if (!(dt > 0.0)) throw config_error("oracle grid: dt must be > 0");
        if (p.gamma_ge * dt > 0.05 || std::abs(p.omega) * dt > 0.05)
            throw config_error(
                "oracle grid: dt too coarse for stability (need gamma_ge*dt <= 0.05 "
                "and |Omega|*dt <= 0.05; got gamma_ge*dt = " + std::to_string(p.gamma_ge * dt) +
                ", |Omega|*dt = " + std::to_string(std::abs(p.omega) * dt) + ")");
    }
};

struct OracleResult {
    TimeTrace signal_out;
    TimeTrace idler_out; // conjugated idler envelope at z = L
};

namespace detail {

// polarization state on the nz+1 spatial nodes
struct BlochState {
    std::vector<complexd> b_ge;
    std::vector<complexd> b_gs;
};

class MaxwellBlochIntegrator {
public:
    MaxwellBlochIntegrator(const MediumParams& p, int nz)
        : p_(p), nz_(nz), dz_(1.0 / nz),
          coupling_(std::sqrt(p.optical_depth * p.gamma_ge / 2.0)),
          eps_(epsilon(p)) {}

    // sweep the field integrals through the medium at fixed time
    void fields(const BlochState& s, complexd a0,
                std::vector<complexd>& a_s, std::vector<complexd>& a_i) const {
        const complexd i{0.0, 1.0};
        a_s[0] = a0;
        a_i[0] = {0.0, 0.0};
        for (int j = 0; j < nz_; ++j) {
            a_s[j + 1] = a_s[j] + i * coupling_ * (dz_ / 2.0) * (s.b_ge[j] + s.b_ge[j + 1]);
            a_i[j + 1] = a_i[j] - i * eps_ * coupling_ * (dz_ / 2.0) * (s.b_gs[j] + s.b_gs[j + 1]);
        }
    }

    void rhs(const BlochState& s, complexd a0, BlochState& ds,
             std::vector<complexd>& a_s, std::vector<complexd>& a_i) const {
        const complexd i{0.0, 1.0};
        fields(s, a0, a_s, a_i);
        const complexd om_conj = std::conj(p_.omega);
        for (int j = 0; j <= nz_; ++j) {
            ds.b_ge[j] = -p_.gamma_ge * s.b_ge[j] + i * coupling_ * a_s[j] + i * p_.omega * s.b_gs[j];
            ds.b_gs[j] = -p_.gamma_gs * s.b_gs[j] + i * eps_ * coupling_ * a_i[j] + i * om_conj * s.b_ge[j];
        }
    }

    int nodes() const { return nz_ + 1; }

private:
    MediumParams p_;
    int nz_;
    double dz_;
    double coupling_;
    complexd eps_;
};

inline void axpy(BlochState& y, const BlochState& x, double a) {
    for (std::size_t j = 0; j < y.b_ge.size(); ++j) {
        y.b_ge[j] += a * x.b_ge[j];
        y.b_gs[j] += a * x.b_gs[j];
    }
}

} // namespace detail

inline OracleResult integrate(const TimeTrace& input, const MediumParams& params,
                              const GridConfig& grid) {
    input.validate();
    params.validate();
    grid.validate(params);

    // extend with zero input when the configured window outlasts the trace
    std::size_t n = input.samples.size();
    if (grid.window > input.duration())
        n = static_cast<std::size_t>(std::ceil(grid.window / input.dt));

    const int substeps = std::max(1, static_cast<int>(std::ceil(input.dt / grid.dt)));
    const double h = input.dt / substeps;

    detail::MaxwellBlochIntegrator mb(params, grid.nz);
    const std::size_t nodes = mb.nodes();
    detail::BlochState state{std::vector<complexd>(nodes), std::vector<complexd>(nodes)};
    detail::BlochState k1 = state, k2 = state, k3 = state, k4 = state, tmp = state;
    std::vector<complexd> a_s(nodes), a_i(nodes);

    auto boundary = [&](double t) -> complexd {
        // linear interpolation of the input envelope, zero outside the trace
        const double s = (t - input.t0) / input.dt;
        const auto i = static_cast<std::ptrdiff_t>(std::floor(s));
        const auto m = static_cast<std::ptrdiff_t>(input.samples.size());
        if (i < 0 || i >= m) return {0.0, 0.0};
        if (i == m - 1) return input.samples[m - 1];
        const double f = s - static_cast<double>(i);
        return input.samples[i] * (1.0 - f) + input.samples[i + 1] * f;
    };

    auto check_stable = [&](std::size_t step) {
        for (std::size_t j = 0; j < nodes; ++j)
            if (std::abs(state.b_ge[j]) > 1e12 || std::abs(state.b_gs[j]) > 1e12)
                throw numerical_error(
                    "oracle: state diverged at step " + std::to_string(step) +
                    "; reduce grid.dt (currently " + std::to_string(grid.dt) + " s)");
    };

    OracleResult out;
    out.signal_out = TimeTrace{input.t0, input.dt, std::vector<complexd>(n)};
    out.idler_out = TimeTrace{input.t0, input.dt, std::vector<complexd>(n)};

    mb.fields(state, boundary(input.t0), a_s, a_i);
    out.signal_out.samples[0] = a_s[nodes - 1];
    out.idler_out.samples[0] = a_i[nodes - 1];

    for (std::size_t step = 0; step + 1 < n; ++step) {
        for (int sub = 0; sub < substeps; ++sub) {
            const double t = input.t0 + input.dt * static_cast<double>(step) + h * sub;
            mb.rhs(state, boundary(t), k1, a_s, a_i);
            tmp = state;
            detail::axpy(tmp, k1, h / 2.0);
            mb.rhs(tmp, boundary(t + h / 2.0), k2, a_s, a_i);
            tmp = state;
            detail::axpy(tmp, k2, h / 2.0);
            mb.rhs(tmp, boundary(t + h / 2.0), k3, a_s, a_i);
            tmp = state;
            detail::axpy(tmp, k3, h);
            mb.rhs(tmp, boundary(t + h), k4, a_s, a_i);
            detail::axpy(state, k1, h / 6.0);
            detail::axpy(state, k2, h / 3.0);
            detail::axpy(state, k3, h / 3.0);
            detail::axpy(state, k4, h / 6.0);
        }
        check_stable(step);
        mb.fields(state, boundary(input.t0 + input.dt * static_cast<double>(step + 1)), a_s, a_i);
        out.signal_out.samples[step + 1] = a_s[nodes - 1];
        out.idler_out.samples[step + 1] = a_i[nodes - 1];
    }
    return out;
}

// Successive relative L2 differences of the signal output under grid
// refinement (nz, dt) -> (2nz, dt/2) -> (4nz, dt/4).
struct ConvergenceLevel {
    int nz = 0;
    double dt = 0.0;
    double l2_diff_from_prev = 0.0; // 0 for the first level
};

struct ConvergenceReport {
    std::vector<ConvergenceLevel> levels;
    bool monotone = true; // differences strictly shrinking
};

inline ConvergenceReport convergence_report(const TimeTrace& input, const MediumParams& params,
                                            const GridConfig& grid) {
    ConvergenceReport report;
    std::vector<TimeTrace> outputs;
    for (int level = 0; level < 3; ++level) {
        GridConfig g = grid;
        g.nz = grid.nz << level;
        g.dt = grid.dt / static_cast<double>(1 << level);
        outputs.push_back(integrate(input, params, g).signal_out);
        ConvergenceLevel cl{g.nz, g.dt, 0.0};
        if (level > 0) {
            const TimeTrace& a = outputs[level - 1];
            const TimeTrace& b = outputs[level];
            double num = 0.0, den = 0.0;
            const std::size_t m = std::min(a.samples.size(), b.samples.size());
            for (std::size_t k = 0; k < m; ++k) {
                num += std::norm(a.samples[k] - b.samples[k]);
                den += std::norm(b.samples[k]);
            }
            cl.l2_diff_from_prev = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
        }
        report.levels.push_back(cl);
    }
    if (report.levels.size() >= 3 &&
        report.levels[2].l2_diff_from_prev >= report.levels[1].l2_diff_from_prev)
        report.monotone = false;
    return report;
}

} // namespace slowlight
