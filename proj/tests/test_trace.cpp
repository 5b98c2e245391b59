#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "slowlight/propagation.hpp"
#include "slowlight/trace.hpp"

using namespace slowlight;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("square pulse hits exact levels and sample count") {
    PulseSpec spec{PulseShape::Square, 6e-6, 0.0, 1.0, 10e-6};
    const TimeTrace tr = synthesize(spec, 40e-6, 50e-9);
    std::size_t ones = 0;
    for (const complexd& a : tr.samples) {
        CHECK((a == complexd{0.0, 0.0} || a == complexd{1.0, 0.0}));
        if (a == complexd{1.0, 0.0}) ++ones;
    }
    CHECK(ones == 120); // 6 us / 50 ns
}

TEST_CASE("gaussian width is the intensity FWHM") {
    PulseSpec spec{PulseShape::Gaussian, 4e-6, 0.0, 0.7, 20e-6};
    const double dt = 20e-9;
    const TimeTrace tr = synthesize(spec, 80e-6, dt);
    CHECK_THAT(intensity_fwhm(tr), WithinAbs(4e-6, dt));
    // peak amplitude normalization
    double peak = 0.0;
    for (const complexd& a : tr.samples) peak = std::max(peak, std::abs(a));
    CHECK_THAT(peak, WithinRel(0.7, 1e-6));
}

TEST_CASE("double pulse consists of two disjoint copies") {
    PulseSpec single{PulseShape::Square, 2e-6, 0.0, 1.0, 10e-6};
    PulseSpec dbl{PulseShape::Double, 2e-6, 8e-6, 1.0, 10e-6};
    const TimeTrace one = synthesize(single, 60e-6, 40e-9);
    const TimeTrace two = synthesize(dbl, 60e-6, 40e-9);
    CHECK_THAT(two.energy(), WithinRel(2.0 * one.energy(), 1e-12));
}

TEST_CASE("synthesis preconditions") {
    PulseSpec spec{PulseShape::Square, 6e-6, 0.0, 1.0, 10e-6};
    CHECK_THROWS_AS(synthesize(spec, 20e-6, 50e-9), config_error);  // window < 4*width
    CHECK_THROWS_AS(synthesize(spec, 40e-6, 0.5e-6), config_error); // dt > width/32
    PulseSpec overlap{PulseShape::Double, 2e-6, 1e-6, 1.0, 10e-6};
    CHECK_THROWS_AS(synthesize(overlap, 60e-6, 40e-9), config_error);
    PulseSpec negative{PulseShape::Gaussian, -1e-6, 0.0, 1.0, 10e-6};
    CHECK_THROWS_AS(synthesize(negative, 60e-6, 40e-9), config_error);
}

TEST_CASE("spectrum round trip is the identity") {
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);
    TimeTrace tr{1.5e-6, 1e-7, {}};
    tr.samples.resize(100);
    for (complexd& a : tr.samples) a = complexd{gauss(rng), gauss(rng)};

    const Spectrum spec = to_spectrum(tr);
    CHECK(spec.samples.size() >= 4 * tr.samples.size());
    const TimeTrace back = from_spectrum(spec, tr.t0, tr.dt);
    double max_err = 0.0, max_val = 0.0;
    for (std::size_t k = 0; k < tr.samples.size(); ++k) {
        max_err = std::max(max_err, std::abs(back.samples[k] - tr.samples[k]));
        max_val = std::max(max_val, std::abs(tr.samples[k]));
    }
    CHECK(max_err <= 1e-12 * max_val);
    // padding region reconstructs to zero
    for (std::size_t k = tr.samples.size(); k < back.samples.size(); ++k)
        CHECK_THAT(std::abs(back.samples[k]), WithinAbs(0.0, 1e-12));
}

TEST_CASE("impulse has a flat magnitude spectrum") {
    TimeTrace tr{0.0, 1e-6, std::vector<complexd>(32, complexd{0.0, 0.0})};
    tr.samples[7] = complexd{2.0, 0.0};
    const Spectrum spec = to_spectrum(tr);
    const double expect = 2.0 * tr.dt;
    for (const complexd& s : spec.samples) CHECK_THAT(std::abs(s), WithinRel(expect, 1e-12));
}

TEST_CASE("constant trace concentrates at zero frequency") {
    TimeTrace tr{0.0, 1e-6, std::vector<complexd>(64, complexd{1.0, 0.0})};
    const Spectrum spec = to_spectrum(tr);
    std::size_t kmax = 0;
    for (std::size_t k = 1; k < spec.samples.size(); ++k)
        if (std::abs(spec.samples[k]) > std::abs(spec.samples[kmax])) kmax = k;
    CHECK_THAT(spec.omega_at(kmax), WithinAbs(0.0, 1e-12));
}

TEST_CASE("Parseval under the chosen convention") {
    std::mt19937 rng(777);
    std::normal_distribution<double> gauss(0.0, 1.0);
    TimeTrace tr{0.0, 2e-7, {}};
    tr.samples.resize(50);
    for (complexd& a : tr.samples) a = complexd{gauss(rng), gauss(rng)};

    const Spectrum spec = to_spectrum(tr);
    double spectral = 0.0;
    for (const complexd& s : spec.samples) spectral += std::norm(s);
    spectral *= spec.d_omega / (2.0 * std::numbers::pi);
    CHECK_THAT(spectral, WithinRel(tr.energy(), 1e-12));
}

TEST_CASE("single-bin spectrum reconstructs a complex exponential") {
    Spectrum spec;
    const std::size_t n = 64;
    const double dt = 1e-6;
    spec.d_omega = 2.0 * std::numbers::pi / (n * dt);
    spec.omega0 = -spec.d_omega * (n / 2.0);
    spec.samples.assign(n, complexd{0.0, 0.0});
    const std::size_t bin = n / 2 + 3;
    spec.samples[bin] = complexd{1.0, 0.0};

    const TimeTrace tr = from_spectrum(spec, 0.0, dt);
    const double w = spec.omega_at(bin);
    const double amp = spec.d_omega / (2.0 * std::numbers::pi);
    for (std::size_t k = 0; k < n; k += 5) {
        const complexd expect = amp * complexd{std::cos(-w * tr.time_at(k)),
                                               std::sin(-w * tr.time_at(k))};
        CHECK_THAT(std::abs(tr.samples[k] - expect), WithinAbs(0.0, 1e-12 * amp));
    }
}

TEST_CASE("zero spectrum gives a zero trace") {
    Spectrum spec;
    const std::size_t n = 16;
    const double dt = 1e-6;
    spec.d_omega = 2.0 * std::numbers::pi / (n * dt);
    spec.omega0 = -spec.d_omega * (n / 2.0);
    spec.samples.assign(n, complexd{0.0, 0.0});
    const TimeTrace tr = from_spectrum(spec, 0.0, dt);
    for (const complexd& a : tr.samples) CHECK(a == complexd{0.0, 0.0});
}

TEST_CASE("trace validation") {
    TimeTrace bad{0.0, -1e-6, std::vector<complexd>(16)};
    CHECK_THROWS_AS(bad.validate(), config_error);
    TimeTrace tiny{0.0, 1e-6, std::vector<complexd>(4)};
    CHECK_THROWS_AS(tiny.validate(), config_error);
}
