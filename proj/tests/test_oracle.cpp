#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "slowlight/metrics.hpp"
#include "slowlight/oracle.hpp"
#include "slowlight/propagation.hpp"

using namespace slowlight;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

MediumParams scaled(double d, double ggs, double om, double eps_abs) {
    MediumParams p;
    p.optical_depth = d;
    p.gamma_ge = 1.0;
    p.gamma_gs = ggs;
    p.delta = 1.0;
    p.omega = complexd{om, 0.0};
    p.eta_eff = (om != 0.0) ? eps_abs / om : 0.0;
    return p;
}

TimeTrace gaussian_input(double fwhm, double center, double window, double dt) {
    PulseSpec spec{PulseShape::Gaussian, fwhm, 0.0, 1.0, center};
    return synthesize(spec, window, dt);
}

double rel_l2(const TimeTrace& a, const TimeTrace& b) {
    double num = 0.0, den = 0.0;
    const std::size_t m = std::min(a.samples.size(), b.samples.size());
    for (std::size_t k = 0; k < m; ++k) {
        num += std::norm(a.samples[k] - b.samples[k]);
        den += std::norm(b.samples[k]);
    }
    return std::sqrt(num / den);
}

} // namespace

TEST_CASE("oracle two-level absorption limit") {
    // pulse much slower than 1/gamma_ge: energy ratio exp(-10) to 0.5%
    PulseSpec spec{PulseShape::Gaussian, 150.0, 0.0, 1.0, 300.0};
    const TimeTrace in = synthesize(spec, 600.0, 2.0);
    const GridConfig grid{100, 0.04, 0.0};
    const OracleResult res = integrate(in, scaled(10.0, 1e-3, 0.0, 0.0), grid);
    CHECK_THAT(res.signal_out.energy() / in.energy(), WithinRel(std::exp(-10.0), 5e-3));
}

TEST_CASE("idler stays dark without the 4WM coupling") {
    const TimeTrace in = gaussian_input(10.0, 25.0, 100.0, 0.25);
    const GridConfig grid{80, 0.05, 0.0};
    const OracleResult res = integrate(in, scaled(8.0, 1e-3, 0.7, 0.0), grid);
    for (const complexd& a : res.idler_out.samples) CHECK(a == complexd{0.0, 0.0});

    // and with Omega = 0 as well
    const OracleResult res2 = integrate(in, scaled(8.0, 1e-3, 0.0, 0.0), grid);
    for (const complexd& a : res2.idler_out.samples) CHECK(a == complexd{0.0, 0.0});
}

TEST_CASE("oracle matches the spectral path on the benchmark point") {
    // D=20, gamma_gs=1e-3, Omega=0.5, eps in {0, 0.05}
    const TimeTrace in = gaussian_input(20.0, 50.0, 240.0, 0.25);
    const GridConfig grid{100, 0.05, 0.0};
    for (double eps : {0.0, 0.05}) {
        const MediumParams p = scaled(20.0, 1e-3, 0.5, eps);
        const OracleResult res = integrate(in, p, grid);
        const TimeTrace spectral = propagate(in, p);
        CHECK(rel_l2(res.signal_out, spectral) < 0.01);
    }
}

TEST_CASE("oracle is linear in the input") {
    const MediumParams p = scaled(10.0, 1e-3, 0.6, 0.04);
    const GridConfig grid{64, 0.05, 0.0};
    const TimeTrace a = gaussian_input(10.0, 30.0, 120.0, 0.25);
    TimeTrace b = a;
    for (std::size_t k = 0; k < b.samples.size(); ++k)
        b.samples[k] = complexd{0.2, 0.4} * a.samples[k];

    const complexd alpha{2.0, 0.0};
    TimeTrace mix = a;
    for (std::size_t k = 0; k < mix.samples.size(); ++k)
        mix.samples[k] = alpha * a.samples[k] + b.samples[k];

    const OracleResult ra = integrate(a, p, grid);
    const OracleResult rb = integrate(b, p, grid);
    const OracleResult rmix = integrate(mix, p, grid);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < rmix.signal_out.samples.size(); ++k) {
        const complexd combo = alpha * ra.signal_out.samples[k] + rb.signal_out.samples[k];
        num += std::norm(rmix.signal_out.samples[k] - combo);
        den += std::norm(combo);
    }
    CHECK(std::sqrt(num / den) < 1e-10);
}

TEST_CASE("oracle passivity without 4WM") {
    const GridConfig grid{64, 0.05, 0.0};
    const TimeTrace in = gaussian_input(8.0, 25.0, 100.0, 0.25);
    for (const MediumParams& p :
         {scaled(5.0, 0.0, 0.8, 0.0), scaled(30.0, 1e-2, 0.4, 0.0), scaled(3.0, 0.0, 0.0, 0.0)}) {
        const OracleResult res = integrate(in, p, grid);
        CHECK(res.signal_out.energy() <= in.energy() * (1.0 + 1e-9));
    }
}

TEST_CASE("CW line-center transmission exceeds one with gain") {
    // long square pulse plateau, gamma_gs = 0, eps > 0
    PulseSpec spec{PulseShape::Square, 150.0, 0.0, 1.0, 120.0};
    const TimeTrace in = synthesize(spec, 700.0, 0.25);
    const MediumParams p = scaled(10.0, 0.0, 1.0, 0.1);
    const GridConfig grid{100, 0.05, 0.0};
    const OracleResult res = integrate(in, p, grid);
    // plateau sample mid-pulse, well after transients
    const std::size_t k = static_cast<std::size_t>(150.0 / in.dt);
    const double plateau = std::abs(res.signal_out.samples[k]);
    CHECK(plateau > 1.0);
    CHECK_THAT(plateau, WithinRel(1.1297888165, 0.01));
}

TEST_CASE("zero input integrates to zero output at every refinement") {
    TimeTrace in{0.0, 0.25, std::vector<complexd>(256, complexd{0.0, 0.0})};
    const GridConfig grid{64, 0.05, 0.0};
    const ConvergenceReport rep = convergence_report(in, scaled(5.0, 0.0, 0.5, 0.05), grid);
    for (const ConvergenceLevel& l : rep.levels) CHECK(l.l2_diff_from_prev == 0.0);
}

TEST_CASE("empty medium propagates the input at every refinement") {
    const TimeTrace in = gaussian_input(10.0, 25.0, 100.0, 0.25);
    const GridConfig grid{64, 0.05, 0.0};
    const MediumParams p = scaled(0.0, 0.0, 0.5, 0.0);
    for (int level = 0; level < 3; ++level) {
        GridConfig g{grid.nz << level, grid.dt / (1 << level), 0.0};
        const OracleResult res = integrate(in, p, g);
        CHECK(rel_l2(res.signal_out, in) < 1e-12);
    }
}

TEST_CASE("refinement differences shrink by at least 3x per level") {
    const TimeTrace in = gaussian_input(20.0, 50.0, 240.0, 0.5);
    const GridConfig grid{50, 0.05, 0.0};
    const ConvergenceReport rep = convergence_report(in, scaled(20.0, 1e-3, 0.5, 0.05), grid);
    REQUIRE(rep.levels.size() == 3);
    CHECK(rep.monotone);
    CHECK(rep.levels[2].l2_diff_from_prev * 3.0 <= rep.levels[1].l2_diff_from_prev);
}

TEST_CASE("grid validation and stability diagnostics") {
    const TimeTrace in = gaussian_input(10.0, 25.0, 100.0, 0.25);
    const MediumParams p = scaled(10.0, 1e-3, 0.5, 0.0);
    CHECK_THROWS_AS(integrate(in, p, GridConfig{10, 0.05, 0.0}), config_error); // nz < 50
    CHECK_THROWS_AS(integrate(in, p, GridConfig{64, 0.2, 0.0}), config_error);  // dt too coarse
    CHECK_THROWS_AS(integrate(in, p, GridConfig{64, -1.0, 0.0}), config_error);
}

TEST_CASE("window extension pads the output grid with zero input") {
    const TimeTrace in = gaussian_input(10.0, 25.0, 100.0, 0.25);
    const GridConfig grid{64, 0.05, 150.0};
    const OracleResult res = integrate(in, scaled(1.0, 0.0, 0.5, 0.0), grid);
    CHECK(res.signal_out.samples.size() == static_cast<std::size_t>(std::ceil(150.0 / 0.25)));
}
