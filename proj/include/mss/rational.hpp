#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace mss {

// All weights and measures are exact; nothing in this library touches
// floating point except for display formatting in the CLI.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "p" or "p/q" with decimal integer p, q. Throws SchemaError on malformed
// input (including q == 0); does not check positivity.
Rational parse_rational(const std::string& text);

// Canonical form: "p" if the denominator is 1, else "p/q" reduced.
std::string format_rational(const Rational& value);

// Fixed-point decimal rendering (display only), e.g. ratios in reports.
std::string format_decimal(const Rational& value, int digits);

}  // namespace mss
