#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

namespace amodes {

using Rational = mpq_class;
using Integer = mpz_class;

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);
/// Accepts "p", "p/q" and "-p/q". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);
/// Exact binary value of a finite double.
Rational exact_rational(double x);

}  // namespace amodes
