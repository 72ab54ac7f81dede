#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace dmslice {

using BigInt = mpz_class;
using Rational = mpq_class;

// High-precision real used wherever values are irrational (log weights,
// fractional powers).  x86-64 long double carries a 64-bit mantissa.
using Real = long double;
static_assert(std::numeric_limits<Real>::digits >= 50,
              "Real must carry at least 50 significant bits");

// Overflow-checked 64-bit arithmetic for the exact integer hot paths.
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 addition overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 multiplication overflow");
  return r;
}

// |base|^exp with overflow check.
std::int64_t ipow(std::int64_t base, unsigned exp);

// Largest r >= 0 with r^k <= n (n >= 0, k >= 1).
std::int64_t iroot(std::int64_t n, unsigned k);

// Smallest r >= 0 with r^k >= n.
std::int64_t iroot_ceil(std::int64_t n, unsigned k);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

// Non-negative remainder.
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

Rational make_rational(std::int64_t num, std::int64_t den = 1);

// Parses "p", "p/q" or a finite decimal like "0.625".
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

// q^n for integer n (negative allowed when q != 0).
Rational rational_pow(const Rational& q, long n);

Real to_real(const BigInt& z);
Real to_real(const Rational& q);

// Returns true and sets root when z >= 0 is a perfect n-th power.
bool exact_root(const BigInt& z, unsigned long n, BigInt& root);

inline std::int64_t to_int64(const BigInt& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
  return z.get_si();
}

}  // namespace dmslice
