#include "dmslice/arith.hpp"

#include <cctype>
#include <cmath>

namespace dmslice {

std::int64_t ipow(std::int64_t base, unsigned exp) {
  std::int64_t result = 1;
  for (unsigned i = 0; i < exp; ++i) result = checked_mul(result, base);
  return result;
}

namespace {

// r^k <= n without overflow.
bool pow_at_most(std::int64_t r, unsigned k, std::int64_t n) {
  std::int64_t acc = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (__builtin_mul_overflow(acc, r, &acc)) return false;
    if (acc > n) return false;
  }
  return true;
}

}  // namespace

std::int64_t iroot(std::int64_t n, unsigned k) {
  if (n < 0) throw std::domain_error("iroot of negative number");
  if (k == 0) throw std::domain_error("iroot with k = 0");
  if (k == 1 || n < 2) return n;
  auto r = static_cast<std::int64_t>(std::pow(static_cast<long double>(n), 1.0L / k));
  while (r > 0 && !pow_at_most(r, k, n)) --r;
  while (pow_at_most(r + 1, k, n)) ++r;
  return r;
}

std::int64_t iroot_ceil(std::int64_t n, unsigned k) {
  std::int64_t r = iroot(n, k);
  return pow_at_most(r, k, n) && ipow(r, k) == n ? r : r + 1;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / gcd64(a, b), b < 0 ? -b : b);
}

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational q{BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den))};
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  auto parse_int = [](const std::string& t) {
    if (t.empty() || t == "-" || t == "+") throw std::invalid_argument("malformed integer");
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) throw std::invalid_argument("malformed integer: " + t);
    return BigInt(t[0] == '+' ? t.substr(1) : t);
  };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    BigInt num = parse_int(s.substr(0, slash));
    BigInt den = parse_int(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in " + s);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    BigInt w = parse_int(whole);
    if (frac.empty()) return Rational(w);
    BigInt f = parse_int(frac);
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Rational q(f, scale);
    q.canonicalize();
    return negative ? Rational(Rational(w) - q) : Rational(Rational(w) + q);
  }
  return Rational(parse_int(s));
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_pow(const Rational& q, long n) {
  if (n == 0) return Rational(1);
  if (q == 0) {
    if (n < 0) throw std::domain_error("zero to a negative power");
    return Rational(0);
  }
  unsigned long e = static_cast<unsigned long>(n < 0 ? -n : n);
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), e);
  Rational r = n > 0 ? Rational(num, den) : Rational(den, num);
  r.canonicalize();
  return r;
}

Real to_real(const BigInt& z) {
  // Accumulate limbs so that the result keeps the full long double mantissa.
  const std::size_t limbs = mpz_size(z.get_mpz_t());
  Real acc = 0;
  constexpr Real base = 18446744073709551616.0L;  // 2^64
  static_assert(sizeof(mp_limb_t) == 8);
  for (std::size_t i = limbs; i-- > 0;) acc = acc * base + static_cast<Real>(mpz_getlimbn(z.get_mpz_t(), i));
  return mpz_sgn(z.get_mpz_t()) < 0 ? -acc : acc;
}

Real to_real(const Rational& q) {
  const auto& num = q.get_num();
  const auto& den = q.get_den();
  // Truncate huge operands to 128 significant bits and carry the exponent.
  auto reduce = [](const BigInt& z, long& shift) {
    long bits = static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
    shift = bits > 128 ? bits - 128 : 0;
    BigInt r;
    mpz_tdiv_q_2exp(r.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    return to_real(r);
  };
  long sn = 0, sd = 0;
  Real n = reduce(num, sn);
  Real d = reduce(den, sd);
  return std::ldexp(n / d, static_cast<int>(sn - sd));
}

bool exact_root(const BigInt& z, unsigned long n, BigInt& root) {
  if (z < 0) return false;
  return mpz_root(root.get_mpz_t(), z.get_mpz_t(), n) != 0;
}

}  // namespace dmslice
