#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "slowlight/errors.hpp"

// Angular-momentum coupling algebra: Wigner 3-j and 6-j symbols from the
// Racah factorial closed forms, Clebsch-Gordan coefficients, and the
// relative sigma+ transition amplitudes used to weight the Zeeman-resolved
// Raman branch ratios. Quantum numbers are passed as doubles holding
// integers or half-integers; each value is validated on entry.

namespace slowlight::angular {

namespace detail {

// doubled representation: j -> 2j as int, exact for half-integers
inline int twice(double j, const char* what) {
    double t = 2.0 * j;
    double r = std::nearbyint(t);
    if (!std::isfinite(t) || std::abs(t - r) > 1e-9)
        throw config_error(std::string(what) + " must be integer or half-integer, got " + std::to_string(j));
    return static_cast<int>(r);
}

inline double log_fact(int n) {
    return std::lgamma(static_cast<double>(n) + 1.0);
}

// log of the triangle coefficient Delta(a,b,c); arguments doubled
inline bool triangle_ok(int ta, int tb, int tc) {
    return ta + tb >= tc && tb + tc >= ta && tc + ta >= tb && (ta + tb + tc) % 2 == 0;
}

inline double log_triangle(int ta, int tb, int tc) {
    return 0.5 * (log_fact((ta + tb - tc) / 2) + log_fact((ta - tb + tc) / 2) +
                  log_fact((-ta + tb + tc) / 2) - log_fact((ta + tb + tc) / 2 + 1));
}

} // namespace detail

// Wigner 3-j symbol (j1 j2 j3; m1 m2 m3).
inline double wigner_3j(double j1, double j2, double j3, double m1, double m2, double m3) {
    using namespace detail;
    const int tj1 = twice(j1, "j1"), tj2 = twice(j2, "j2"), tj3 = twice(j3, "j3");
    const int tm1 = twice(m1, "m1"), tm2 = twice(m2, "m2"), tm3 = twice(m3, "m3");
    if (tj1 < 0 || tj2 < 0 || tj3 < 0)
        throw config_error("negative angular momentum in wigner_3j");
    if ((tj1 + tm1) % 2 || (tj2 + tm2) % 2 || (tj3 + tm3) % 2)
        throw config_error("m not compatible with j in wigner_3j");
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3) return 0.0;
    if (tm1 + tm2 + tm3 != 0) return 0.0;
    if (!triangle_ok(tj1, tj2, tj3)) return 0.0;

    // Racah sum over k, with all factorial arguments kept as plain integers
    const int kmin = std::max({0, (tj2 - tj3 - tm1) / 2, (tj1 - tj3 + tm2) / 2});
    const int kmax = std::min({(tj1 + tj2 - tj3) / 2, (tj1 - tm1) / 2, (tj2 + tm2) / 2});
    if (kmin > kmax) return 0.0;

    const double logpre =
        log_triangle(tj1, tj2, tj3) +
        0.5 * (log_fact((tj1 + tm1) / 2) + log_fact((tj1 - tm1) / 2) +
               log_fact((tj2 + tm2) / 2) + log_fact((tj2 - tm2) / 2) +
               log_fact((tj3 + tm3) / 2) + log_fact((tj3 - tm3) / 2));

    double sum = 0.0;
    for (int k = kmin; k <= kmax; ++k) {
        const double logden = log_fact(k) +
                              log_fact((tj1 + tj2 - tj3) / 2 - k) +
                              log_fact((tj1 - tm1) / 2 - k) +
                              log_fact((tj2 + tm2) / 2 - k) +
                              log_fact((tj3 - tj2 + tm1) / 2 + k) +
                              log_fact((tj3 - tj1 - tm2) / 2 + k);
        const double term = std::exp(logpre - logden);
        sum += (k % 2 ? -term : term);
    }
    const int phase = (tj1 - tj2 - tm3) / 2;
    return (phase % 2 ? -sum : sum);
}

// Wigner 6-j symbol {j1 j2 j3; j4 j5 j6}.
inline double wigner_6j(double j1, double j2, double j3, double j4, double j5, double j6) {
    using namespace detail;
    const int t1 = twice(j1, "j1"), t2 = twice(j2, "j2"), t3 = twice(j3, "j3");
    const int t4 = twice(j4, "j4"), t5 = twice(j5, "j5"), t6 = twice(j6, "j6");
    if (t1 < 0 || t2 < 0 || t3 < 0 || t4 < 0 || t5 < 0 || t6 < 0)
        throw config_error("negative angular momentum in wigner_6j");
    if (!triangle_ok(t1, t2, t3) || !triangle_ok(t1, t5, t6) ||
        !triangle_ok(t4, t2, t6) || !triangle_ok(t4, t5, t3))
        return 0.0;

    const double logpre = log_triangle(t1, t2, t3) + log_triangle(t1, t5, t6) +
                          log_triangle(t4, t2, t6) + log_triangle(t4, t5, t3);

    const int s123 = (t1 + t2 + t3) / 2, s156 = (t1 + t5 + t6) / 2;
    const int s426 = (t4 + t2 + t6) / 2, s453 = (t4 + t5 + t3) / 2;
    const int p1245 = (t1 + t2 + t4 + t5) / 2;
    const int p2356 = (t2 + t3 + t5 + t6) / 2;
    const int p3164 = (t3 + t1 + t6 + t4) / 2;

    const int kmin = std::max({s123, s156, s426, s453});
    const int kmax = std::min({p1245, p2356, p3164});

    double sum = 0.0;
    for (int k = kmin; k <= kmax; ++k) {
        const double logterm = log_fact(k + 1) -
                               log_fact(k - s123) - log_fact(k - s156) -
                               log_fact(k - s426) - log_fact(k - s453) -
                               log_fact(p1245 - k) - log_fact(p2356 - k) - log_fact(p3164 - k);
        const double term = std::exp(logpre + logterm);
        sum += (k % 2 ? -term : term);
    }
    return sum;
}

// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> (Condon-Shortley phases).
inline double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M) {
    const int phase = detail::twice(j1 - j2 + M, "j1-j2+M") / 2;
    const double v = std::sqrt(2.0 * J + 1.0) * wigner_3j(j1, j2, J, m1, m2, -M);
    return (phase % 2 ? -v : v);
}

// m-independent normalization constant of the sigma+ line F -> F',
// i.e. the prefactor of <F m; 1 1 | F' m+1> once the m-dependent angular
// factor is split off. Defined for F' in {F-1, F, F+1}.
inline double line_constant(double f, double fp) {
    const int tf = detail::twice(f, "F"), tfp = detail::twice(fp, "F'");
    const double F = tf / 2.0;
    if (tfp == tf + 2) return 1.0 / std::sqrt((2.0 * F + 1.0) * (2.0 * F + 2.0));
    if (tfp == tf) return -1.0 / std::sqrt(2.0 * F * (F + 1.0));
    if (tfp == tf - 2) return 1.0 / std::sqrt(2.0 * F * (2.0 * F + 1.0));
    throw config_error("line_constant: F' must be F-1, F, or F+1");
}

// Relative sigma+ amplitude of |F,m> -> |F',m+1> with the line constant
// divided out; 0 when the target sublevel does not exist. Lines normalized
// this way can be compared across F' without carrying reduced-element
// conventions, which is exactly what the Raman branch ratio needs.
inline double sigma_plus_relative_amplitude(double f, double m, double fp) {
    const int tfp = detail::twice(fp, "F'");
    const int tmp = detail::twice(m + 1.0, "m+1");
    if (std::abs(tmp) > tfp) return 0.0;
    return clebsch_gordan(f, m, 1.0, 1.0, fp, m + 1.0) / line_constant(f, fp);
}

// Hyperfine reduced-element factor <F||.||F'> / <J||.||J'> for reference and
// diagnostics (not used by the branch ratio; see sigma_plus_relative_amplitude).
inline double hyperfine_reduced_factor(double J, double Jp, double I, double F, double Fp) {
    const int phase = detail::twice(Fp + J + 1.0 + I, "F'+J+1+I") / 2;
    const double v = std::sqrt((2.0 * Fp + 1.0) * (2.0 * J + 1.0)) *
                     wigner_6j(J, Jp, 1.0, Fp, F, I);
    return (phase % 2 ? -v : v);
}

} // namespace slowlight::angular
