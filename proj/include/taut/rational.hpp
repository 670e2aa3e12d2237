#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace taut {

/// Exact rational with arbitrary-precision numerator and denominator.
using Rational = mpq_class;
using Integer = mpz_class;

/// "p/q" in lowest terms, always with an explicit denominator.
std::string to_string(const Rational& q);

/// Parses "p/q" or "p". Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// num/den in lowest terms. mpq_class(num, den) alone does not reduce, and
/// comparisons of unreduced values are wrong.
Rational ratio(const Integer& num, const Integer& den);

Rational factorial(int n);

/// n!! for odd n >= -1, with (-1)!! = 1.
Rational double_factorial(int n);

Rational binomial(int n, int k);

}  // namespace taut
