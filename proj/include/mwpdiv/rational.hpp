#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace mwpdiv {

/// Exact arbitrary-precision rational; evaluation and solving never round.
/// The answer-comparison tolerance is applied only at the final comparison.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "12", "0.75", "1,275", "3/4", optionally with one leading '-'.
Rational parse_number(std::string_view text);

/// Exact decimal string when the denominator is of the form 2^a * 5^b
/// (up to 18 fractional digits), otherwise "p/q".
std::string format_rational(const Rational& r);

double rational_to_double(const Rational& r);

/// |computed - labeled| <= 1e-6 * max(1, |labeled|), evaluated exactly.
bool answers_match(const Rational& computed, const Rational& labeled);

}  // namespace mwpdiv
