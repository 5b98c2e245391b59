#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "slowlight/errors.hpp"
#include "slowlight/medium.hpp"

// Signal transfer function of the EIT-4WM medium,
//
//   T(w) = e^A ( B sinh C + cosh C )
//   A = -(D g_ge / 4V) (iw - iw|e|^2 + |e|^2 g_ge - g_gs)
//   B = -W / U,  C = (D g_ge / 4V) U
//   W = iw + (iw - g_ge)|e|^2 - g_gs
//   U = sqrt(W^2 + 4|e Om|^2)
//   V = (i g_gs + w)(w + i g_ge) - |Om|^2
//
// evaluated entirely in log space as T = e^{A+C}(1+B)/2 + e^{A-C}(1-B)/2 so
// that optical depths of several hundred stay representable. (1 +- B) are
// rationalized through (U -+ W) = 4|eOm|^2 / (U +- W) whichever way avoids
// cancellation, and |C| < 1e-6 switches to a series in C^2 where B sinh C
// is the indeterminate product -W kappa sinhc(C).

namespace slowlight {

// One evaluated transfer-function point. `value` is set only when
// exp(log_magnitude) is representable in double; log_magnitude and phase are
// always finite for finite parameters.
struct TransferSample {
    double omega = 0.0;
    std::optional<complexd> value;
    double log_magnitude = 0.0;
    double phase = 0.0; // unwrapped along grids
};

inline complexd eval_V(double omega, const MediumParams& p) {
    const complexd i{0.0, 1.0};
    return (i * p.gamma_gs + omega) * (omega + i * p.gamma_ge) - std::norm(p.omega);
}

inline complexd eval_U(double omega, const MediumParams& p) {
    const complexd i{0.0, 1.0};
    const double e2 = std::norm(epsilon(p));
    const complexd w = i * omega + (i * omega - p.gamma_ge) * e2 - p.gamma_gs;
    const double eo2 = e2 * std::norm(p.omega);
    return std::sqrt(w * w + 4.0 * eo2);
}

namespace detail {

constexpr double kLogValueMax = 709.0;  // ~log(DBL_MAX)
constexpr double kLogValueMin = -745.0; // ~log(denormal_min)

inline std::optional<complexd> representable(double log_mag, double phase) {
    if (!(log_mag < kLogValueMax) || !(log_mag > kLogValueMin)) return std::nullopt;
    const double mag = std::exp(log_mag);
    return complexd{mag * std::cos(phase), mag * std::sin(phase)};
}

} // namespace detail

inline TransferSample transfer_signal(double omega, const MediumParams& p) {
    p.validate();
    if (!std::isfinite(omega)) throw config_error("transfer: non-finite omega");

    const complexd i{0.0, 1.0};
    const double e2 = std::norm(epsilon(p));
    const double eo2 = e2 * std::norm(p.omega);
    const double d = p.optical_depth;

    const complexd V = eval_V(omega, p);
    if (V == complexd{0.0, 0.0})
        throw numerical_error("transfer: V(omega) = 0 exactly at omega = " + std::to_string(omega));

    const complexd W = i * omega + (i * omega - p.gamma_ge) * e2 - p.gamma_gs;
    // U = principal sqrt when the radicand is genuinely shifted; for eo2 = 0
    // pick U = W so one exponential branch vanishes identically.
    const complexd U = (eo2 > 0.0) ? std::sqrt(W * W + 4.0 * eo2) : W;

    const complexd kappa = d * p.gamma_ge / (4.0 * V);
    const complexd A = -kappa * (i * omega - i * omega * e2 + e2 * p.gamma_ge - p.gamma_gs);
    const complexd C = kappa * U;

    TransferSample out;
    out.omega = omega;

    if (std::abs(C) < 1e-6) {
        // B sinh C = -W kappa C sinhc(C) / ... with C/U = kappa, so the U -> 0
        // limit is regular: inner = -W kappa sinhc(C) + cosh(C).
        const complexd c2 = C * C;
        const complexd sinhc = 1.0 + c2 / 6.0 * (1.0 + c2 / 20.0);
        const complexd coshv = 1.0 + c2 / 2.0 * (1.0 + c2 / 12.0);
        const complexd inner = -W * kappa * sinhc + coshv;
        out.log_magnitude = A.real() + std::log(std::abs(inner));
        out.phase = A.imag() + std::arg(inner);
        out.value = detail::representable(out.log_magnitude, out.phase);
        return out;
    }

    // (1+B) = (U-W)/U, (1-B) = (U+W)/U with (U-W)(U+W) = 4 eo2 exactly.
    complexd s_minus = U - W;
    complexd s_plus = U + W;
    if (eo2 > 0.0) {
        if (std::abs(s_minus) < std::abs(s_plus))
            s_minus = 4.0 * eo2 / s_plus;
        else
            s_plus = 4.0 * eo2 / s_minus;
    } else {
        s_minus = 0.0; // U == W by construction
        s_plus = 2.0 * W;
    }

    const double log_u = std::log(std::abs(U));
    const double arg_u = std::arg(U);
    const double log2 = std::numbers::ln2;

    // term_+ = e^{A+C}(1+B)/2, term_- = e^{A-C}(1-B)/2
    double l1 = -std::numeric_limits<double>::infinity(), f1 = 0.0;
    double l2 = l1, f2 = 0.0;
    if (s_minus != complexd{0.0, 0.0}) {
        l1 = (A + C).real() + std::log(std::abs(s_minus)) - log_u - log2;
        f1 = (A + C).imag() + std::arg(s_minus) - arg_u;
    }
    if (s_plus != complexd{0.0, 0.0}) {
        l2 = (A - C).real() + std::log(std::abs(s_plus)) - log_u - log2;
        f2 = (A - C).imag() + std::arg(s_plus) - arg_u;
    }
    if (l1 < l2) {
        std::swap(l1, l2);
        std::swap(f1, f2);
    }
    if (!std::isfinite(l1))
        throw numerical_error("transfer: vanishing transfer value (degenerate parameters)");

    const double r = std::exp(l2 - l1); // <= 1, or 0 when a branch vanished
    const double delta = f2 - f1;
    const complexd z = 1.0 + r * complexd{std::cos(delta), std::sin(delta)};
    out.log_magnitude = l1 + std::log(std::abs(z));
    out.phase = f1 + std::arg(z);
    out.value = detail::representable(out.log_magnitude, out.phase);
    return out;
}

// Vectorized evaluation over a strictly increasing, uniformly spaced grid,
// with the phase unwrapped to a continuous branch.
inline std::vector<TransferSample> transfer_grid(const std::vector<double>& omegas,
                                                 const MediumParams& p) {
    if (omegas.empty()) throw config_error("transfer_grid: empty grid");
    if (omegas.size() > 1) {
        const double h = omegas[1] - omegas[0];
        if (!(h > 0.0)) throw config_error("transfer_grid: grid must be strictly increasing");
        for (std::size_t k = 1; k < omegas.size(); ++k) {
            const double hk = omegas[k] - omegas[k - 1];
            if (!(hk > 0.0) || std::abs(hk - h) > 1e-9 * std::max(std::abs(h), std::abs(hk)))
                throw config_error("transfer_grid: grid spacing must be uniform");
        }
    }
    std::vector<TransferSample> out;
    out.reserve(omegas.size());
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (double w : omegas) {
        TransferSample s = transfer_signal(w, p);
        if (!out.empty()) {
            const double prev = out.back().phase;
            s.phase -= two_pi * std::round((s.phase - prev) / two_pi);
        }
        out.push_back(s);
    }
    return out;
}

// Principal-branch U per point with sign continuity enforced along the grid.
// The transfer value is even in U, so this affects diagnostics only.
inline std::vector<complexd> continuous_U_grid(const std::vector<double>& omegas,
                                               const MediumParams& p) {
    std::vector<complexd> out;
    out.reserve(omegas.size());
    for (double w : omegas) {
        complexd u = eval_U(w, p);
        if (!out.empty() && std::abs(u - out.back()) > std::abs(-u - out.back())) u = -u;
        out.push_back(u);
    }
    return out;
}

} // namespace slowlight
