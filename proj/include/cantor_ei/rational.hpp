#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace cantor_ei {

/// Arbitrary-precision rational, always kept in lowest terms.
using Rational = mpq_class;
using Integer = mpz_class;

/// Builds num/den in canonical form. Throws domain_error when den == 0.
Rational make_rational(long num, long den = 1);
Rational make_rational(const Integer& num, const Integer& den);

/// "p/q" with q > 0, also for integers ("1/1", "0/1").
std::string to_string(const Rational& r);

/// Accepts "p/q", "p" or a finite decimal such as "0.25".
Rational parse_rational(std::string_view text);

/// Bit length of the (positive) denominator.
std::size_t denominator_bits(const Rational& r);

double to_double(const Rational& r);

/// Decimal with 12 significant digits ("nan" for NaN).
std::string format_real(double x);

Integer ipow(const Integer& base, unsigned long exponent);

} // namespace cantor_ei
