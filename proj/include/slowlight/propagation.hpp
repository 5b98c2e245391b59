#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "slowlight/errors.hpp"
#include "slowlight/fft.hpp"
#include "slowlight/trace.hpp"
#include "slowlight/transfer.hpp"

// Spectral-domain pulse propagation: the output envelope is the inverse
// transform of T(w) times the input spectrum.
//
// Convention: analysis uses kernel e^{+i w t}, reconstruction e^{-i w t},
//   S(w)  = dt sum_n x_n e^{+i w t_n}
//   x(t)  = (dw / 2 pi) sum_k S_k e^{-i w_k t}
// under which an EIT medium (transfer phase slope +D g_ge/(2|Om|^2) at line
// center) delays the pulse by a positive time. Spectra are stored with
// ascending frequency.

namespace slowlight {

inline constexpr std::size_t kMaxPaddedLength = std::size_t{1} << 24;

// DFT of the zero-padded trace; pad length is the next power of two at least
// 4x the raw length and at least min_len.
inline Spectrum to_spectrum(const TimeTrace& trace, std::size_t min_len = 0) {
    trace.validate();
    const std::size_t n = trace.samples.size();
    const std::size_t N = fft::next_pow2(std::max({4 * n, min_len, std::size_t{8}}));
    if (N > kMaxPaddedLength)
        throw config_error("to_spectrum: padded length exceeds limit");

    std::vector<complexd> buf(N, complexd{0.0, 0.0});
    std::copy(trace.samples.begin(), trace.samples.end(), buf.begin());
    fft::backward(buf); // kernel e^{+2 pi i k n / N}

    const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(N) * trace.dt);
    Spectrum spec;
    spec.d_omega = d_omega;
    spec.omega0 = -d_omega * static_cast<double>(N / 2);
    spec.samples.resize(N);
    for (std::size_t a = 0; a < N; ++a) {
        const std::size_t k = (a + N / 2) % N; // ascending order <-> fft bin
        const double w = spec.omega_at(a);
        const complexd phase{std::cos(w * trace.t0), std::sin(w * trace.t0)};
        spec.samples[a] = trace.dt * phase * buf[k];
    }
    return spec;
}

// Inverse of to_spectrum on the padded grid.
inline TimeTrace from_spectrum(const Spectrum& spec, double t0, double dt) {
    const std::size_t N = spec.samples.size();
    if (N < 8) throw config_error("from_spectrum: too few samples");
    if (!(dt > 0.0)) throw config_error("from_spectrum: dt must be > 0");
    const double expected = 2.0 * std::numbers::pi / (static_cast<double>(N) * dt);
    if (std::abs(spec.d_omega - expected) > 1e-9 * expected)
        throw config_error("from_spectrum: d_omega inconsistent with N*dt");

    std::vector<complexd> buf(N);
    for (std::size_t a = 0; a < N; ++a) {
        const std::size_t k = (a + N / 2) % N;
        const double w = spec.omega_at(a);
        const complexd phase{std::cos(-w * t0), std::sin(-w * t0)};
        buf[k] = spec.samples[a] * phase;
    }
    fft::forward(buf); // kernel e^{-2 pi i k n / N}

    TimeTrace out{t0, dt, std::move(buf)};
    const double scale = 1.0 / (static_cast<double>(N) * dt);
    for (complexd& a : out.samples) a *= scale;
    return out;
}

// Fraction of trace energy in the final 5% of the window; delayed energy
// reaching that region would alias back to the start of the grid.
inline double tail_energy_fraction(const TimeTrace& trace) {
    const double total = trace.energy();
    if (!(total > 0.0)) return 0.0;
    const std::size_t tail_start =
        static_cast<std::size_t>(std::floor(0.95 * static_cast<double>(trace.samples.size())));
    double tail = 0.0;
    for (std::size_t k = tail_start; k < trace.samples.size(); ++k)
        tail += std::norm(trace.samples[k]);
    return tail * trace.dt / total;
}

// Applies the medium transfer function to a trace. The returned trace lives
// on the padded time grid; trimming back to the input window is the
// caller's explicit choice. min_padded_len forces a common grid across
// calls that must be compared sample-by-sample.
inline TimeTrace propagate(const TimeTrace& input, const MediumParams& params,
                           std::size_t min_padded_len = 0) {
    input.validate();
    params.validate();

    const std::size_t n = input.samples.size();
    const double om2 = std::norm(params.omega);
    const double delay_est = om2 > 0.0
        ? params.optical_depth * params.gamma_ge / (2.0 * om2) : 0.0;
    double width_est = intensity_fwhm(input);
    if (!(width_est > 0.0)) width_est = input.duration();

    const double extra_time = delay_est + 10.0 * width_est;
    std::size_t min_len = n + static_cast<std::size_t>(std::ceil(extra_time / input.dt));

    // the padded grid must resolve both the pulse bandwidth and, when a
    // transparency window exists, the EIT linewidth
    double d_omega_max = (2.0 * std::numbers::pi / width_est) / 8.0;
    if (om2 > 0.0 || params.gamma_gs > 0.0) {
        const double eit_bw = params.gamma_gs +
            om2 / (params.gamma_ge * std::max(params.optical_depth, 1.0));
        if (eit_bw > 0.0) d_omega_max = std::min(d_omega_max, eit_bw / 8.0);
    }
    std::size_t N = fft::next_pow2(std::max({4 * n, min_len, min_padded_len, std::size_t{8}}));
    while (2.0 * std::numbers::pi / (static_cast<double>(N) * input.dt) > d_omega_max) {
        if (N >= kMaxPaddedLength)
            throw config_error("propagate: window too short to resolve the medium bandwidth");
        N <<= 1;
    }

    Spectrum spec = to_spectrum(input, N);
    std::vector<double> omegas(spec.samples.size());
    for (std::size_t a = 0; a < omegas.size(); ++a) omegas[a] = spec.omega_at(a);
    const std::vector<TransferSample> ts = transfer_grid(omegas, params);

    for (std::size_t a = 0; a < spec.samples.size(); ++a) {
        if (spec.samples[a] == complexd{0.0, 0.0}) continue;
        if (ts[a].value) {
            spec.samples[a] *= *ts[a].value;
        } else if (ts[a].log_magnitude <= 0.0) {
            spec.samples[a] = 0.0; // underflow: fully absorbed component
        } else {
            throw numerical_error("propagate: transfer value overflows at populated frequency");
        }
    }

    TimeTrace out = from_spectrum(spec, input.t0, input.dt);
    if (tail_energy_fraction(out) > 1e-4)
        throw numerical_error("propagate: window too short / aliased delay");
    return out;
}

// First ceil(window/dt) samples; explicit helper for callers that want the
// original synthesis window back.
inline TimeTrace trim_to_window(const TimeTrace& trace, double window) {
    if (!(window > 0.0)) throw config_error("trim_to_window: window must be > 0");
    const auto n = static_cast<std::size_t>(std::ceil(window / trace.dt));
    if (n >= trace.samples.size()) return trace;
    TimeTrace out{trace.t0, trace.dt, {trace.samples.begin(), trace.samples.begin() + n}};
    return out;
}

} // namespace slowlight
