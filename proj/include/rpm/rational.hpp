#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace rpm {

/// Arbitrary-precision rational; always canonical (den > 0, gcd 1).
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// "p/q" for non-integers, "p" for integers.
inline std::string to_fraction_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational parse_fraction(const std::string& s) {
  Rational r(s);
  r.canonicalize();
  return r;
}

inline Rational factorial(unsigned n) {
  BigInt f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

/// 1/n! with the convention 1/(-m)! = 0 for m > 0.
inline Rational inverse_factorial(long n) {
  if (n < 0) return Rational(0);
  return 1 / factorial(static_cast<unsigned>(n));
}

/// Rising factorial (a)_n = a(a+1)...(a+n-1).
inline Rational pochhammer(const Rational& a, unsigned n) {
  Rational r(1);
  for (unsigned i = 0; i < n; ++i) r *= a + i;
  return r;
}

/// Gamma(a - n) / Gamma(a) = prod_{k=1}^{n} 1/(a - k).
inline Rational gamma_shift_down(const Rational& a, unsigned n) {
  Rational r(1);
  for (unsigned k = 1; k <= n; ++k) r /= a - k;
  return r;
}

inline Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) return pow(1 / base, -exponent);
  Rational r(1), b(base);
  auto e = static_cast<unsigned long>(exponent);
  while (e) {
    if (e & 1u) r *= b;
    b *= b;
    e >>= 1u;
  }
  return r;
}

}  // namespace rpm
