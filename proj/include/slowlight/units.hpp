#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "slowlight/errors.hpp"

// Unit-suffixed quantity parsing. Everything inside the library is angular
// frequency [rad/s] and time [s]; the boundary accepts explicit suffixes only,
// so the pi-vs-2pi convention is fixed exactly once, here.
//
//   frequencies: Hz, kHz, MHz, GHz          -> multiplied by 2*pi into rad/s
//                rad/s, krad/s, Mrad/s, Grad/s -> taken as angular directly
//   times:       s, us, ns                  -> seconds

namespace slowlight::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct parsed_quantity {
    double value = 0.0;   // in internal units (rad/s or s)
    bool is_time = false; // false: angular frequency
};

namespace detail {

inline std::optional<double> suffix_scale_frequency(std::string_view s) {
    if (s == "Hz") return two_pi;
    if (s == "kHz") return two_pi * 1e3;
    if (s == "MHz") return two_pi * 1e6;
    if (s == "GHz") return two_pi * 1e9;
    if (s == "rad/s") return 1.0;
    if (s == "krad/s") return 1e3;
    if (s == "Mrad/s") return 1e6;
    if (s == "Grad/s") return 1e9;
    return std::nullopt;
}

inline std::optional<double> suffix_scale_time(std::string_view s) {
    if (s == "s") return 1.0;
    if (s == "us") return 1e-6;
    if (s == "ns") return 1e-9;
    return std::nullopt;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace detail

// Splits "<number> <suffix>" and classifies the suffix. Throws config_error
// on anything it cannot parse exactly.
inline parsed_quantity parse_quantity(std::string_view text) {
    std::string_view s = detail::trim(text);
    if (s.empty()) throw config_error("empty quantity string");

    std::size_t i = 0;
    while (i < s.size() && !std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
    std::string_view num = detail::trim(s.substr(0, i));
    std::string_view suffix = detail::trim(s.substr(i));

    double v = 0.0;
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec != std::errc{} || p != num.data() + num.size())
        throw config_error("cannot parse number in quantity '" + std::string(text) + "'");
    if (!std::isfinite(v))
        throw config_error("non-finite quantity '" + std::string(text) + "'");

    if (auto f = detail::suffix_scale_frequency(suffix))
        return {v * *f, false};
    if (auto t = detail::suffix_scale_time(suffix))
        return {v * *t, true};
    throw config_error("unknown unit suffix '" + std::string(suffix) +
                       "' in '" + std::string(text) +
                       "' (expected Hz/kHz/MHz/GHz, rad/s family, or s/us/ns)");
}

// rad/s from a suffixed string; rejects time units.
inline double parse_angular_frequency(std::string_view text) {
    parsed_quantity q = parse_quantity(text);
    if (q.is_time)
        throw config_error("expected a frequency, got a time: '" + std::string(text) + "'");
    return q.value;
}

// seconds from a suffixed string; rejects frequency units.
inline double parse_time(std::string_view text) {
    parsed_quantity q = parse_quantity(text);
    if (!q.is_time)
        throw config_error("expected a time, got a frequency: '" + std::string(text) + "'");
    return q.value;
}

} // namespace slowlight::units
