#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hyperwalk {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Accepts "p/q", integers, and finite decimals such as "0.2" (read exactly as 1/5).
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

BigInt pow(const BigInt& base, unsigned long exponent);
Rational pow(const Rational& base, unsigned long exponent);

/// Nearest long double to q (GMP's mpq_get_d truncates to double only).
long double to_long_double(const Rational& q);

}  // namespace hyperwalk
