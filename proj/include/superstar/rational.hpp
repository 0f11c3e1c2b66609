#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace superstar {

/// Arbitrary-precision rational, always kept canonical (reduced, positive
/// denominator). Exact solvers never round.
using Rational = mpq_class;

/// Parses "p/q", an integer, or a decimal literal with optional exponent
/// ("1.1", "2.5e-3", "1e6") into the exact value it denotes.
/// Throws std::invalid_argument on anything else or a zero denominator.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

/// Decimal rendering with `digits` significant places after the point.
std::string to_decimal(const Rational& value, int digits = 12);

inline double to_double(const Rational& value) { return value.get_d(); }

}  // namespace superstar
