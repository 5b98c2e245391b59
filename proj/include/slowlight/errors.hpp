#pragma once

#include <stdexcept>
#include <string>

namespace slowlight {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration or input data (bad units, malformed files, parameter
// domain violations). CLI exit code 2.
class config_error : public error {
public:
    explicit config_error(const std::string& msg) : error(msg) {}
};

// Singular parameter combinations (e.g. delta = 0 with nonzero coupling).
class singular_parameter_error : public config_error {
public:
    explicit singular_parameter_error(const std::string& msg) : config_error(msg) {}
};

// Runtime numerical failure (aliased delay window, overflowing transfer
// values, integrator instability). CLI exit code 3.
class numerical_error : public error {
public:
    explicit numerical_error(const std::string& msg) : error(msg) {}
};

} // namespace slowlight
