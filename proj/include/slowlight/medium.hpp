#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slowlight/angular.hpp"
#include "slowlight/errors.hpp"

// Physical parameters of the slow-light medium and the scalar parameter
// algebra derived from them: the 4WM coupling ratio epsilon, the 4WM
// strength x, and the Zeeman-averaged interaction-strength ratio eta_eff.

namespace slowlight {

using complexd = std::complex<double>;

enum class Isotope { Rb85, Rb87 };

// D1-line constants for one rubidium isotope. Frequencies are angular [rad/s].
struct IsotopeSpec {
    Isotope name = Isotope::Rb85;
    double ground_splitting = 0.0;  // |g> to |s> hyperfine splitting
    double excited_splitting = 0.0; // between the two D1 excited manifolds
    double gamma_ge = 0.0;          // excited-state polarization decay
    std::vector<double> f_ground;   // ground F quantum numbers, ascending
    std::vector<double> f_excited;  // excited F quantum numbers, ascending
    double nuclear_spin = 0.0;

    void validate() const {
        if (!(ground_splitting > 0.0) || !(excited_splitting > 0.0) || !(gamma_ge > 0.0))
            throw config_error("isotope: splittings and gamma_ge must be positive");
        if (f_ground.size() != 2 || f_excited.size() != 2)
            throw config_error("isotope: expected two ground and two excited F manifolds");
    }

    double f_ground_lower() const { return *std::min_element(f_ground.begin(), f_ground.end()); }
    double f_ground_upper() const { return *std::max_element(f_ground.begin(), f_ground.end()); }
    double f_excited_lower() const { return *std::min_element(f_excited.begin(), f_excited.end()); }
    double f_excited_upper() const { return *std::max_element(f_excited.begin(), f_excited.end()); }
};

namespace isotopes {

inline constexpr double pi = std::numbers::pi;

// Ground splittings follow the hyperfine values the signal sidebands are
// tuned to; excited splittings are the standard D1 reference values.
inline IsotopeSpec rb85() {
    return IsotopeSpec{Isotope::Rb85,
                       2.0 * pi * 3.035e9,
                       2.0 * pi * 361.58e6,
                       pi * 5.75e6,
                       {2.0, 3.0},
                       {2.0, 3.0},
                       2.5};
}

inline IsotopeSpec rb87() {
    return IsotopeSpec{Isotope::Rb87,
                       2.0 * pi * 6.835e9,
                       2.0 * pi * 814.5e6,
                       pi * 5.75e6,
                       {1.0, 2.0},
                       {1.0, 2.0},
                       1.5};
}

inline IsotopeSpec by_name(std::string_view name) {
    if (name == "rb85" || name == "Rb85" || name == "85") return rb85();
    if (name == "rb87" || name == "Rb87" || name == "87") return rb87();
    throw config_error("unknown isotope '" + std::string(name) + "' (expected rb85 or rb87)");
}

inline std::string to_string(Isotope iso) {
    return iso == Isotope::Rb85 ? "rb85" : "rb87";
}

} // namespace isotopes

// Full parameter set consumed by the transfer function. All frequencies
// angular [rad/s]; optical_depth defined so resonant intensity transmission
// without control is exp(-D).
struct MediumParams {
    double optical_depth = 0.0; // D >= 0
    double gamma_ge = 0.0;      // > 0
    double gamma_gs = 0.0;      // >= 0
    double delta = 0.0;         // idler two-photon detuning
    complexd omega{0.0, 0.0};   // control Rabi frequency
    double eta_eff = 0.0;       // idler-to-signal coupling strength ratio

    void validate() const {
        auto finite = [](double v) { return std::isfinite(v); };
        if (!finite(optical_depth) || !finite(gamma_ge) || !finite(gamma_gs) ||
            !finite(delta) || !finite(eta_eff) ||
            !finite(omega.real()) || !finite(omega.imag()))
            throw config_error("medium parameters must be finite");
        if (optical_depth < 0.0) throw config_error("optical_depth must be >= 0");
        if (!(gamma_ge > 0.0)) throw config_error("gamma_ge must be > 0");
        if (gamma_gs < 0.0) throw config_error("gamma_gs must be >= 0");
        if (delta == 0.0 && eta_eff != 0.0)
            throw singular_parameter_error("delta = 0 with nonzero eta_eff");
    }
};

// epsilon = eta_eff * Omega / Delta.
inline complexd epsilon(const MediumParams& p) {
    if (p.eta_eff == 0.0) return {0.0, 0.0};
    if (p.delta == 0.0)
        throw singular_parameter_error("epsilon: delta = 0 with nonzero eta_eff");
    return p.eta_eff * p.omega / p.delta;
}

// x = eta_eff * (D/2) * (gamma_ge / Delta); x ~ 1 marks strong 4WM.
inline double fwm_strength_x(const MediumParams& p) {
    if (p.delta == 0.0)
        throw singular_parameter_error("fwm_strength_x: delta = 0");
    return p.eta_eff * (p.optical_depth / 2.0) * (p.gamma_ge / p.delta);
}

// Reported alongside every x value. The x convention implemented here is the
// plain formula above; published discussions of the same experiments quote
// lower values (0.34 at D=550 in Rb85, 0.08 at D=350 in Rb87, a consistent
// factor ~0.81) obtained under an unstated normalization. Values are never
// rescaled to match.
inline std::string fwm_strength_convention_note() {
    return "x computed as eta_eff*(D/2)*(gamma_ge/delta); quoted literature values "
           "for the same settings are ~0.81x lower under an unstated convention "
           "(0.34 vs 0.42 at D=550 Rb85; 0.08 vs 0.098 at D=350 Rb87)";
}

// Idler detunings from the (lower, upper) excited hyperfine manifolds.
struct IdlerDetunings {
    double lower = 0.0; // from F' = lower manifold [rad/s]
    double upper = 0.0; // from F' = upper manifold [rad/s]
};

// Default: the idler sits one ground splitting below the control, so it is
// detuned by the full ground splitting from the upper manifold and by the
// ground splitting minus the excited splitting from the lower one.
inline IdlerDetunings default_idler_detunings(const IsotopeSpec& iso) {
    return {iso.ground_splitting - iso.excited_splitting, iso.ground_splitting};
}

// Interaction-strength ratio for one Zeeman sublevel m_F of the lower ground
// manifold: the two off-resonant idler routes (via the lower and upper
// excited manifolds) summed with relative-detuning weight,
//   eta_mF = (d_s->e' * d_g->e') / (d_g->e * d_s->e) + Delta_lower/Delta_upper.
// The second route's dipole ratio cancels to exactly 1, leaving the detuning
// ratio. Dipole factors are per-line-normalized sigma+ amplitudes; the
// m-independent line constants are common to both routes and drop out.
inline double eta_mf(const IsotopeSpec& iso, int m_f, const IdlerDetunings& det) {
    iso.validate();
    const double fg = iso.f_ground_lower();  // |g>
    const double fs = iso.f_ground_upper();  // |s>
    const double fel = iso.f_excited_lower(); // |e'>
    const double feu = iso.f_excited_upper(); // |e>
    const double m = static_cast<double>(m_f);
    if (std::abs(m) > fg)
        throw config_error("eta_mf: m_F = " + std::to_string(m_f) +
                           " outside the F = " + std::to_string(fg) + " manifold");
    if (det.lower == 0.0 || det.upper == 0.0)
        throw singular_parameter_error("eta_mf: zero idler detuning");

    using angular::sigma_plus_relative_amplitude;
    const double num = sigma_plus_relative_amplitude(fs, m, fel) *
                       sigma_plus_relative_amplitude(fg, m, fel);
    const double den = sigma_plus_relative_amplitude(fg, m, feu) *
                       sigma_plus_relative_amplitude(fs, m, feu);
    if (den == 0.0)
        throw config_error("eta_mf: vanishing resonant-route amplitude at m_F = " +
                           std::to_string(m_f));
    return num / den + det.lower / det.upper;
}

// Uniform-population average of eta_mf over the coupled ground sublevels.
inline double eta_eff(const IsotopeSpec& iso, const IdlerDetunings& det) {
    iso.validate();
    const int fg = static_cast<int>(iso.f_ground_lower());
    double sum = 0.0;
    int count = 0;
    for (int m = -fg; m <= fg; ++m) {
        sum += eta_mf(iso, m, det);
        ++count;
    }
    return sum / count;
}

inline double eta_eff(const IsotopeSpec& iso) {
    return eta_eff(iso, default_idler_detunings(iso));
}

} // namespace slowlight
