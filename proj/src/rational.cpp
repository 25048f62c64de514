#include "hyperwalk/rational.hpp"

#include <cctype>
#include <cmath>

#include "hyperwalk/error.hpp"

namespace hyperwalk {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::Parse, "cannot parse rational \"" + std::string(text) + "\"", "rational");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational q;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad(text);
    BigInt d(std::string(den), 10);
    if (d == 0) bad(text);
    q = Rational(BigInt(std::string(num), 10), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    const auto whole = s.substr(0, dot);
    const auto frac = s.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) bad(text);
    BigInt num(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    BigInt den = pow(BigInt(10), static_cast<unsigned long>(frac.size()));
    q = Rational(num, den);
  } else {
    if (!all_digits(s)) bad(text);
    q = Rational(BigInt(std::string(s), 10));
  }
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }
std::string to_string(const BigInt& z) { return z.get_str(10); }

BigInt pow(const BigInt& base, unsigned long exponent) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

Rational pow(const Rational& base, unsigned long exponent) {
  Rational out(pow(base.get_num(), exponent), pow(base.get_den(), exponent));
  out.canonicalize();
  return out;
}

long double to_long_double(const Rational& q) {
  if (q == 0) return 0.0L;
  // scale so the quotient carries 80 significant bits
  const long shift = 80 - static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) +
                     static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
  BigInt num = q.get_num();
  BigInt den = q.get_den();
  if (shift > 0) {
    num <<= static_cast<mp_bitcnt_t>(shift);
  } else {
    den <<= static_cast<mp_bitcnt_t>(-shift);
  }
  BigInt quotient = num / den;
  long exp = 0;
  const double hi = mpz_get_d_2exp(&exp, quotient.get_mpz_t());
  // hi carries only 53 bits; add the remainder bits explicitly
  BigInt top;
  mpz_set_d(top.get_mpz_t(), std::ldexp(hi, static_cast<int>(exp)));
  BigInt rest = quotient - top;
  long double value = std::ldexp(static_cast<long double>(hi), static_cast<int>(exp)) +
                      static_cast<long double>(rest.get_d());
  return std::ldexp(value, static_cast<int>(-shift));
}

}  // namespace hyperwalk
