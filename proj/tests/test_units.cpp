#include <catch2/catch_amalgamated.hpp>

#include "slowlight/units.hpp"

using namespace slowlight;
using Catch::Matchers::WithinRel;

TEST_CASE("frequency suffixes convert to angular rad/s") {
    const double two_pi = units::two_pi;
    CHECK_THAT(units::parse_angular_frequency("1 Hz"), WithinRel(two_pi, 1e-15));
    CHECK_THAT(units::parse_angular_frequency("5.75 MHz"), WithinRel(two_pi * 5.75e6, 1e-15));
    CHECK_THAT(units::parse_angular_frequency("3.035 GHz"), WithinRel(two_pi * 3.035e9, 1e-15));
    CHECK_THAT(units::parse_angular_frequency("12.8 kHz"), WithinRel(two_pi * 12.8e3, 1e-15));
    CHECK_THAT(units::parse_angular_frequency("12.8 krad/s"), WithinRel(12.8e3, 1e-15));
    CHECK_THAT(units::parse_angular_frequency("1 rad/s"), WithinRel(1.0, 1e-15));
    CHECK_THAT(units::parse_angular_frequency("-2 MHz"), WithinRel(-two_pi * 2e6, 1e-15));
}

TEST_CASE("time suffixes convert to seconds") {
    CHECK_THAT(units::parse_time("6 us"), WithinRel(6e-6, 1e-15));
    CHECK_THAT(units::parse_time("50 ns"), WithinRel(50e-9, 1e-15));
    CHECK_THAT(units::parse_time("1.5 s"), WithinRel(1.5, 1e-15));
    CHECK_THAT(units::parse_time("  2 us  "), WithinRel(2e-6, 1e-15));
}

TEST_CASE("dimension mismatches and junk are rejected") {
    CHECK_THROWS_AS(units::parse_time("3 MHz"), config_error);
    CHECK_THROWS_AS(units::parse_angular_frequency("3 us"), config_error);
    CHECK_THROWS_AS(units::parse_quantity("3"), config_error);
    CHECK_THROWS_AS(units::parse_quantity("3 parsec"), config_error);
    CHECK_THROWS_AS(units::parse_quantity(""), config_error);
    CHECK_THROWS_AS(units::parse_quantity("MHz"), config_error);
    CHECK_THROWS_AS(units::parse_quantity("1e GHz"), config_error);
}
