#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>

#include "dmslice/arith.hpp"

namespace dmslice {

/// Exact non-negative number of the form  c * prod_i b_i^(e_i)  with rational
/// c >= 0, rational bases b_i > 0 and rational exponents.
///
/// Power-law normalizations like lambda^(-d/2) are irrational for odd d, so
/// maximal-function values are kept in this form and compared exactly by
/// raising both sides to the common denominator of every exponent.
///
/// Canonical form: each stored exponent lies strictly in (0, 1); integer parts
/// and perfect-power bases are folded into the coefficient.
class PowerProduct {
 public:
  PowerProduct() = default;
  explicit PowerProduct(Rational coefficient);
  PowerProduct(std::int64_t coefficient) : PowerProduct(Rational(static_cast<long>(coefficient))) {}

  /// base^exponent for base > 0 (base == 0 allowed when exponent > 0).
  static PowerProduct power(const Rational& base, const Rational& exponent);

  bool is_zero() const { return coeff_ == 0; }
  bool is_rational() const { return factors_.empty(); }
  /// Only valid when is_rational().
  const Rational& rational() const;
  const Rational& coefficient() const { return coeff_; }
  const std::map<Rational, Rational>& factors() const { return factors_; }

  PowerProduct& operator*=(const PowerProduct& other);
  friend PowerProduct operator*(PowerProduct a, const PowerProduct& b) { return a *= b; }
  /// Division by a non-zero value.
  PowerProduct& operator/=(const PowerProduct& other);
  friend PowerProduct operator/(PowerProduct a, const PowerProduct& b) { return a /= b; }

  /// Raise to a rational power (value must be positive unless exponent > 0).
  PowerProduct pow(const Rational& exponent) const;

  Real approx() const;
  /// Natural log of the value; -inf for zero.
  Real log_approx() const;

  std::string str() const;

  friend bool operator==(const PowerProduct& a, const PowerProduct& b) {
    return a.coeff_ == b.coeff_ && a.factors_ == b.factors_;
  }

 private:
  void multiply_factor(const Rational& base, const Rational& exponent);
  void normalize_factor(const Rational& base);

  Rational coeff_{0};
  std::map<Rational, Rational> factors_;
};

/// Exact three-way comparison.  Uses a floating prefilter and falls back to
/// exact integer powering only when the logs are within 1e-9.
std::strong_ordering compare(const PowerProduct& a, const PowerProduct& b);

inline bool operator<(const PowerProduct& a, const PowerProduct& b) { return compare(a, b) < 0; }
inline bool operator>(const PowerProduct& a, const PowerProduct& b) { return compare(a, b) > 0; }
inline bool operator<=(const PowerProduct& a, const PowerProduct& b) { return compare(a, b) <= 0; }
inline bool operator>=(const PowerProduct& a, const PowerProduct& b) { return compare(a, b) >= 0; }

/// A non-negative scalar that is exact when it can be (PowerProduct) and a
/// Real otherwise.  Every value carries its Real approximation.
class Value {
 public:
  Value() : exact_(PowerProduct()), approx_(0) {}
  Value(const PowerProduct& p) : exact_(p), approx_(p.approx()) {}
  static Value approximate(Real r) {
    Value v;
    v.exact_.reset();
    v.approx_ = r;
    return v;
  }

  bool is_exact() const { return exact_.has_value(); }
  bool is_rational() const { return exact_ && exact_->is_rational(); }
  const PowerProduct& exact() const { return *exact_; }
  Real approx() const { return approx_; }
  bool is_zero() const { return exact_ ? exact_->is_zero() : approx_ == 0; }

  friend Value operator*(const Value& a, const Value& b);
  friend Value operator/(const Value& a, const Value& b);
  /// Exact only when both operands are rational.
  friend Value operator+(const Value& a, const Value& b);
  Value pow(const Rational& exponent) const;

  std::string str() const;

 private:
  std::optional<PowerProduct> exact_;
  Real approx_;
};

/// Exact when both are exact, otherwise compares approximations.
std::partial_ordering compare(const Value& a, const Value& b);

/// Signed difference a - b: exact Rational when both are rational, otherwise
/// the Real approximation.  The sign is always derived from compare().
struct Difference {
  std::optional<Rational> exact;
  Real approx = 0;
  int sign = 0;
  std::string str() const;
};

Difference difference(const Value& a, const Value& b);

}  // namespace dmslice
