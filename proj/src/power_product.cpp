#include "dmslice/power_product.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace dmslice {

namespace {

Rational floor_rational(const Rational& q) {
  BigInt f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(f);
}

Real log_rational(const Rational& q) {
  return std::log(to_real(q.get_num())) - std::log(to_real(q.get_den()));
}

}  // namespace

PowerProduct::PowerProduct(Rational coefficient) : coeff_(std::move(coefficient)) {
  coeff_.canonicalize();
  if (coeff_ < 0) throw std::domain_error("PowerProduct must be non-negative");
}

PowerProduct PowerProduct::power(const Rational& base, const Rational& exponent) {
  if (base < 0) throw std::domain_error("negative base in PowerProduct::power");
  if (base == 0) {
    if (exponent <= 0) throw std::domain_error("zero base needs a positive exponent");
    return PowerProduct();
  }
  PowerProduct p(Rational(1));
  p.multiply_factor(base, exponent);
  return p;
}

const Rational& PowerProduct::rational() const {
  if (!is_rational()) throw std::logic_error("PowerProduct is not rational");
  return coeff_;
}

void PowerProduct::multiply_factor(const Rational& base, const Rational& exponent) {
  if (coeff_ == 0 || exponent == 0 || base == 1) return;
  factors_[base] += exponent;
  normalize_factor(base);
}

void PowerProduct::normalize_factor(const Rational& base) {
  auto it = factors_.find(base);
  if (it == factors_.end()) return;
  Rational e = it->second;
  Rational whole = floor_rational(e);
  Rational frac = e - whole;
  if (whole != 0) coeff_ *= rational_pow(base, whole.get_num().get_si());
  if (frac == 0) {
    factors_.erase(it);
    return;
  }
  it->second = frac;
  // base^(p/q) is rational iff numerator and denominator are perfect q-th powers.
  unsigned long q = frac.get_den().get_ui();
  BigInt rn, rd;
  if (exact_root(base.get_num(), q, rn) && exact_root(base.get_den(), q, rd)) {
    Rational root(rn, rd);
    root.canonicalize();
    coeff_ *= rational_pow(root, frac.get_num().get_si());
    factors_.erase(it);
  }
}

PowerProduct& PowerProduct::operator*=(const PowerProduct& other) {
  coeff_ *= other.coeff_;
  if (coeff_ == 0) {
    factors_.clear();
    return *this;
  }
  for (const auto& [b, e] : other.factors_) multiply_factor(b, e);
  return *this;
}

PowerProduct& PowerProduct::operator/=(const PowerProduct& other) {
  if (other.is_zero()) throw std::domain_error("PowerProduct division by zero");
  coeff_ /= other.coeff_;
  if (coeff_ == 0) {
    factors_.clear();
    return *this;
  }
  for (const auto& [b, e] : other.factors_) multiply_factor(b, -e);
  return *this;
}

PowerProduct PowerProduct::pow(const Rational& exponent) const {
  if (is_zero()) {
    if (exponent <= 0) throw std::domain_error("zero to a non-positive power");
    return PowerProduct();
  }
  PowerProduct out(Rational(1));
  out.multiply_factor(coeff_, exponent);
  for (const auto& [b, e] : factors_) out.multiply_factor(b, e * exponent);
  return out;
}

Real PowerProduct::approx() const {
  Real v = to_real(coeff_);
  for (const auto& [b, e] : factors_) v *= std::pow(to_real(b), to_real(e));
  return v;
}

Real PowerProduct::log_approx() const {
  if (is_zero()) return -std::numeric_limits<Real>::infinity();
  Real l = log_rational(coeff_);
  for (const auto& [b, e] : factors_) l += to_real(e) * log_rational(b);
  return l;
}

std::string PowerProduct::str() const {
  std::ostringstream os;
  os << to_string(coeff_);
  for (const auto& [b, e] : factors_) os << "*(" << to_string(b) << ")^(" << to_string(e) << ")";
  return os.str();
}

std::strong_ordering compare(const PowerProduct& a, const PowerProduct& b) {
  if (a.is_zero() || b.is_zero()) {
    if (a.is_zero() && b.is_zero()) return std::strong_ordering::equal;
    return a.is_zero() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a.is_rational() && b.is_rational()) return cmp(a.rational(), b.rational()) <=> 0;

  Real diff = a.log_approx() - b.log_approx();
  if (diff > 1e-9L) return std::strong_ordering::greater;
  if (diff < -1e-9L) return std::strong_ordering::less;

  // a/b = c * prod base^e with e in (0,1); raise to D = lcm of denominators.
  PowerProduct ratio = a / b;
  if (ratio.is_rational()) return cmp(ratio.rational(), Rational(1)) <=> 0;
  BigInt denom_lcm = 1;
  for (const auto& [base, e] : ratio.factors()) mpz_lcm(denom_lcm.get_mpz_t(), denom_lcm.get_mpz_t(), e.get_den_mpz_t());
  if (!denom_lcm.fits_slong_p()) throw std::overflow_error("exponent denominators too large for exact comparison");
  const long D = denom_lcm.get_si();
  Rational lhs = rational_pow(ratio.coefficient(), D);
  for (const auto& [base, e] : ratio.factors()) {
    Rational scaled = e * D;
    lhs *= rational_pow(base, scaled.get_num().get_si());
  }
  return cmp(lhs, Rational(1)) <=> 0;
}

Value operator*(const Value& a, const Value& b) {
  if (a.is_exact() && b.is_exact()) return Value(a.exact() * b.exact());
  return Value::approximate(a.approx() * b.approx());
}

Value operator/(const Value& a, const Value& b) {
  if (a.is_exact() && b.is_exact()) return Value(a.exact() / b.exact());
  return Value::approximate(a.approx() / b.approx());
}

Value operator+(const Value& a, const Value& b) {
  if (a.is_rational() && b.is_rational()) return Value(PowerProduct(a.exact().rational() + b.exact().rational()));
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Value::approximate(a.approx() + b.approx());
}

Value Value::pow(const Rational& exponent) const {
  if (is_exact()) return Value(exact().pow(exponent));
  return Value::approximate(std::pow(approx_, to_real(exponent)));
}

std::string Value::str() const {
  if (is_exact()) return exact().str();
  std::ostringstream os;
  os.precision(18);
  os << "~" << approx_;
  return os.str();
}

std::partial_ordering compare(const Value& a, const Value& b) {
  if (a.is_exact() && b.is_exact()) return compare(a.exact(), b.exact());
  return a.approx() <=> b.approx();
}

Difference difference(const Value& a, const Value& b) {
  Difference d;
  auto ord = compare(a, b);
  d.sign = ord < 0 ? -1 : (ord > 0 ? 1 : 0);
  if (d.sign == 0 && a.is_exact() && b.is_exact()) {
    d.exact = Rational(0);
  } else if (a.is_rational() && b.is_rational()) {
    d.exact = a.exact().rational() - b.exact().rational();
    d.approx = to_real(*d.exact);
  } else {
    d.approx = d.sign == 0 ? 0 : a.approx() - b.approx();
  }
  return d;
}

std::string Difference::str() const {
  if (exact) return to_string(*exact);
  std::ostringstream os;
  os.precision(18);
  os << "~" << approx;
  return os.str();
}

}  // namespace dmslice
