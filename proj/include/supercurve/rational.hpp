#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

namespace supercurve {

// Exact rational scalar used everywhere; no floating point in the library.
using Rational = boost::multiprecision::cpp_rational;

std::string rational_to_string(const Rational& r);

// Accepts "p", "-p", "p/q".  Returns nullopt on malformed input.
std::optional<Rational> parse_rational(const std::string& text);

} // namespace supercurve
