#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "slowlight/errors.hpp"
#include "slowlight/medium.hpp"

namespace slowlight {

// Uniformly sampled complex field envelope vs time.
struct TimeTrace {
    double t0 = 0.0; // start time [s]
    double dt = 0.0; // sample interval [s]
    std::vector<complexd> samples;

    double time_at(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
    double duration() const { return dt * static_cast<double>(samples.size()); }

    // integral of |a|^2 dt
    double energy() const {
        double e = 0.0;
        for (const complexd& a : samples) e += std::norm(a);
        return e * dt;
    }

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw config_error("trace: dt must be positive");
        if (!std::isfinite(t0)) throw config_error("trace: non-finite t0");
        if (samples.size() < 8) throw config_error("trace: need at least 8 samples");
        if (!std::isfinite(energy())) throw config_error("trace: non-finite energy");
    }
};

// Complex amplitudes over a uniform angular-frequency grid, stored in
// ascending order.
struct Spectrum {
    double omega0 = 0.0;  // first angular frequency [rad/s]
    double d_omega = 0.0; // spacing [rad/s]
    std::vector<complexd> samples;

    double omega_at(std::size_t k) const { return omega0 + d_omega * static_cast<double>(k); }
};

enum class PulseShape { Square, Gaussian, Double };

inline PulseShape pulse_shape_from_string(std::string_view s) {
    if (s == "square") return PulseShape::Square;
    if (s == "gaussian") return PulseShape::Gaussian;
    if (s == "double") return PulseShape::Double;
    throw config_error("unknown pulse shape '" + std::string(s) + "'");
}

// Input pulse description. width is the square full width or the gaussian
// intensity FWHM; separation is center-to-center for the double shape.
struct PulseSpec {
    PulseShape shape = PulseShape::Square;
    double width = 0.0;      // [s]
    double separation = 0.0; // [s], double only
    double amplitude = 1.0;
    double center = 0.0; // [s], first-pulse center for double

    void validate() const {
        if (!(width > 0.0)) throw config_error("pulse: width must be > 0");
        if (!(amplitude > 0.0)) throw config_error("pulse: amplitude must be > 0");
        if (shape == PulseShape::Double && !(separation > width))
            throw config_error("pulse: double shape needs separation > width");
    }
};

// Samples the pulse envelope on [0, window). Square pulses hit exact
// 0/amplitude levels; gaussians are normalized to peak amplitude.
inline TimeTrace synthesize(const PulseSpec& spec, double window, double dt) {
    spec.validate();
    if (!(dt > 0.0)) throw config_error("synthesize: dt must be > 0");
    if (window < 4.0 * (spec.width + spec.separation) * (1.0 - 1e-9))
        throw config_error("synthesize: window shorter than 4*(width + separation)");
    if (dt > spec.width / 32.0 * (1.0 + 1e-9))
        throw config_error("synthesize: dt coarser than width/32");

    const std::size_t n = static_cast<std::size_t>(std::ceil(window / dt));
    TimeTrace tr{0.0, dt, std::vector<complexd>(n, complexd{0.0, 0.0})};

    auto add_square = [&](double center) {
        // half-open [lo, hi) resolved to sample indices, robust to roundoff
        // so aligned widths always cover exactly width/dt samples
        const double lo = center - spec.width / 2.0;
        const double hi = center + spec.width / 2.0;
        const auto klo = static_cast<std::ptrdiff_t>(std::ceil(lo / dt - 1e-9));
        const auto khi = static_cast<std::ptrdiff_t>(std::ceil(hi / dt - 1e-9));
        for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(klo, 0);
             k < std::min<std::ptrdiff_t>(khi, static_cast<std::ptrdiff_t>(n)); ++k)
            tr.samples[static_cast<std::size_t>(k)] += spec.amplitude;
    };
    auto add_gaussian = [&](double center) {
        // intensity FWHM = width  =>  amplitude envelope exp(-2 ln2 (t-c)^2/w^2)
        const double c = 2.0 * std::log(2.0) / (spec.width * spec.width);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = tr.time_at(k) - center;
            tr.samples[k] += spec.amplitude * std::exp(-c * t * t);
        }
    };

    switch (spec.shape) {
    case PulseShape::Square: add_square(spec.center); break;
    case PulseShape::Gaussian: add_gaussian(spec.center); break;
    case PulseShape::Double:
        add_square(spec.center);
        add_square(spec.center + spec.separation);
        break;
    }
    tr.validate();
    return tr;
}

// Intensity FWHM via first/last half-maximum crossings, linearly
// interpolated between samples. Returns 0 for traces without a peak.
inline double intensity_fwhm(const TimeTrace& tr) {
    const std::size_t n = tr.samples.size();
    if (n == 0) return 0.0;
    double peak = 0.0;
    for (const complexd& a : tr.samples) peak = std::max(peak, std::norm(a));
    if (peak <= 0.0) return 0.0;
    const double half = peak / 2.0;

    auto intensity = [&](std::size_t k) { return std::norm(tr.samples[k]); };
    std::size_t first = n, last = 0;
    for (std::size_t k = 0; k < n; ++k)
        if (intensity(k) >= half) {
            if (first == n) first = k;
            last = k;
        }
    double lo = tr.time_at(first);
    if (first > 0) {
        const double i0 = intensity(first - 1), i1 = intensity(first);
        lo = tr.time_at(first - 1) + (half - i0) / (i1 - i0) * tr.dt;
    }
    double hi = tr.time_at(last);
    if (last + 1 < n) {
        const double i0 = intensity(last), i1 = intensity(last + 1);
        hi = tr.time_at(last) + (i0 - half) / (i0 - i1) * tr.dt;
    }
    return hi - lo;
}

} // namespace slowlight
