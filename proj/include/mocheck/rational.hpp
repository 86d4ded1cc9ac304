#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace mocheck {

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
using Rational = mpq_class;

/// Parses "p/q", an integer, or a decimal literal ("0.55", "1e-3", "-2.5E2") exactly.
/// Throws ParseError on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Exact rendering: "p/q", or just "p" for integers.
std::string to_string(const Rational& value);

/// Decimal rendering rounded half away from zero to `places` fractional digits.
std::string to_decimal(const Rational& value, int places = 12);

/// Comma separated rationals, e.g. "1/2,1/2".
std::vector<Rational> parse_rational_list(std::string_view text);

inline bool is_probability(const Rational& value) { return value >= 0 && value <= 1; }

}  // namespace mocheck
