#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "slowlight/medium.hpp"

using namespace slowlight;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double pi = std::numbers::pi;

MediumParams rb85_paper_params(double d = 550.0) {
    MediumParams p;
    p.optical_depth = d;
    p.gamma_ge = pi * 5.75e6;
    p.gamma_gs = 1.28e4;
    p.delta = 2.0 * pi * 3.035e9;
    p.omega = complexd{2.0 * pi * 1e6, 0.0};
    p.eta_eff = 1.62;
    return p;
}
} // namespace

TEST_CASE("epsilon = eta * Omega / Delta") {
    MediumParams p = rb85_paper_params();
    // eta=1.62, Omega=2pi*1 MHz, Delta=2pi*3.035 GHz
    CHECK_THAT(std::abs(epsilon(p)), WithinRel(1.62 * 1e6 / 3.035e9, 1e-12));
    CHECK_THAT(std::abs(epsilon(p)), WithinRel(5.3377e-4, 1e-4));

    p.eta_eff = 0.0;
    CHECK(epsilon(p) == complexd{0.0, 0.0});

    p.eta_eff = 1.0;
    p.omega = complexd{p.delta, 0.0};
    CHECK_THAT(epsilon(p).real(), WithinRel(1.0, 1e-14));
    CHECK_THAT(epsilon(p).imag(), WithinAbs(0.0, 1e-14));

    p.delta = 0.0;
    CHECK_THROWS_AS(epsilon(p), singular_parameter_error);
}

TEST_CASE("fwm strength x for the two isotopes") {
    MediumParams p85 = rb85_paper_params(550.0);
    CHECK_THAT(fwm_strength_x(p85), WithinAbs(0.422, 1e-3));

    MediumParams p87 = p85;
    p87.optical_depth = 350.0;
    p87.delta = 2.0 * pi * 6.835e9;
    p87.eta_eff = 1.33;
    CHECK_THAT(fwm_strength_x(p87), WithinAbs(0.098, 1e-3));

    MediumParams empty = rb85_paper_params(0.0);
    CHECK(fwm_strength_x(empty) == 0.0);

    MediumParams sing = rb85_paper_params();
    sing.delta = 0.0;
    CHECK_THROWS_AS(fwm_strength_x(sing), singular_parameter_error);

    CHECK_FALSE(fwm_strength_convention_note().empty());
}

TEST_CASE("fwm strength x scaling properties") {
    const MediumParams p = rb85_paper_params(100.0);
    MediumParams p2 = p;
    p2.optical_depth = 200.0;
    CHECK_THAT(fwm_strength_x(p2), WithinRel(2.0 * fwm_strength_x(p), 1e-14));

    MediumParams pd = p;
    pd.delta = 3.0 * p.delta;
    CHECK_THAT(fwm_strength_x(pd) * pd.delta, WithinRel(fwm_strength_x(p) * p.delta, 1e-14));

    // x = |eps| (D/2) (gamma_ge/|Omega|) for real positive Omega
    const double via_eps = std::abs(epsilon(p)) * (p.optical_depth / 2.0) *
                           (p.gamma_ge / std::abs(p.omega));
    CHECK_THAT(fwm_strength_x(p), WithinRel(via_eps, 1e-12));
}

TEST_CASE("eta_mf table for Rb85") {
    const IsotopeSpec iso = isotopes::rb85();
    const IdlerDetunings det = default_idler_detunings(iso);
    // detuning ratio (3035 - 361.58)/3035
    const double dr = 0.880863261944;
    CHECK_THAT(det.lower / det.upper, WithinAbs(dr, 1e-9));

    // branch ratios 2, 1, 1/2, 1/5, 0 on top of the detuning ratio
    CHECK_THAT(eta_mf(iso, -2, det), WithinAbs(2.0 + dr, 1e-9));
    CHECK_THAT(eta_mf(iso, -1, det), WithinAbs(1.0 + dr, 1e-9));
    CHECK_THAT(eta_mf(iso, 0, det), WithinAbs(0.5 + dr, 1e-9));
    CHECK_THAT(eta_mf(iso, +1, det), WithinAbs(0.2 + dr, 1e-9));
    // stretched sublevel: idler route closed, detuning ratio survives alone
    CHECK_THAT(eta_mf(iso, +2, det), WithinAbs(dr, 1e-12));

    CHECK_THROWS_AS(eta_mf(iso, 3, det), config_error);
    CHECK_THROWS_AS(eta_mf(iso, -2, IdlerDetunings{0.0, det.upper}), singular_parameter_error);
}

TEST_CASE("eta_eff reproduces the isotope averages") {
    CHECK_THAT(eta_eff(isotopes::rb85()), WithinAbs(1.62, 0.02));
    CHECK_THAT(eta_eff(isotopes::rb87()), WithinAbs(1.33, 0.02));
    // frozen to full precision as a regression anchor
    CHECK_THAT(eta_eff(isotopes::rb85()), WithinAbs(1.6208632619, 1e-9));
    CHECK_THAT(eta_eff(isotopes::rb87()), WithinAbs(1.3252783874, 1e-9));
}

TEST_CASE("eta_eff equals eta_mf when only one sublevel is coupled") {
    // a hypothetical spin-1/2 isotope: lower ground manifold F=0 has a single
    // sublevel, so the average must equal that sublevel's value
    IsotopeSpec iso = isotopes::rb87();
    iso.f_ground = {0.0, 1.0};
    iso.f_excited = {0.0, 1.0};
    iso.nuclear_spin = 0.5;
    const IdlerDetunings det = default_idler_detunings(iso);
    CHECK_THAT(eta_eff(iso, det), WithinRel(eta_mf(iso, 0, det), 1e-14));
}

TEST_CASE("medium parameter validation") {
    MediumParams p = rb85_paper_params();
    CHECK_NOTHROW(p.validate());
    p.optical_depth = -1.0;
    CHECK_THROWS_AS(p.validate(), config_error);
    p = rb85_paper_params();
    p.gamma_ge = 0.0;
    CHECK_THROWS_AS(p.validate(), config_error);
    p = rb85_paper_params();
    p.delta = 0.0;
    CHECK_THROWS_AS(p.validate(), singular_parameter_error);
    p.eta_eff = 0.0; // no coupling: delta = 0 is fine
    CHECK_NOTHROW(p.validate());
    p = rb85_paper_params();
    p.omega = complexd{std::nan(""), 0.0};
    CHECK_THROWS_AS(p.validate(), config_error);
}
