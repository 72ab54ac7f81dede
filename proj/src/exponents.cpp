#include "dmslice/exponents.hpp"

#include <sstream>
#include <stdexcept>

namespace dmslice::exponents {

Rational critical_r(Family family, int d, int k, int ell, const std::optional<Rational>& theta) {
  if (d < 1 || ell < 1) throw std::invalid_argument("d and ell must be >= 1");
  const Rational ld(static_cast<long>(ell) * d);
  switch (family) {
    case Family::ball:
    case Family::prime_ball: return make_rational(1, ell);
    case Family::sphere:
    case Family::prime_sphere: {
      const Rational den = ld - k;
      if (den <= 0) throw std::invalid_argument("critical_r: l*d <= k");
      return Rational(d) / den;
    }
    case Family::annulus: {
      if (!theta) throw std::invalid_argument("theta: required for the annulus family");
      const Rational den = ld - 2 + 2 * *theta;
      if (den <= 0) throw std::invalid_argument("critical_r: nonpositive denominator");
      return Rational(d) / den;
    }
    case Family::general_additive: break;
  }
  throw std::invalid_argument("family: no critical exponent for general_additive");
}

Rational r0(int ell, const Rational& delta0) {
  if (delta0 < 0) throw std::invalid_argument("delta0: must be non-negative");
  if (ell < 1) throw std::invalid_argument("ell must be >= 1");
  const Rational a = 2 + 2 * delta0;
  return a / ((ell - 1) * a + (1 + 2 * delta0));
}

Rational p0(int d, int k, const Rational& delta0) {
  if (d <= k) throw std::invalid_argument("p0: requires d > k");
  if (delta0 < 0) throw std::invalid_argument("delta0: must be non-negative");
  const Rational first = 1 + 1 / Rational(1 + 2 * delta0);
  const Rational second = make_rational(d, d - k);
  return first > second ? first : second;
}

Rational prime_r_threshold(int ell, const Rational& p_kd) {
  if (p_kd <= 1) throw std::invalid_argument("p_kd: must exceed 1");
  return p_kd / ((ell - 1) * p_kd + 1);
}

Rational annulus_p0(int d, const Rational& theta) {
  if (theta <= 0 || theta >= 1) throw std::invalid_argument("theta: must satisfy 0 < theta < 1");
  const Rational den = d - 2 + 2 * theta;
  if (den <= 0) throw std::invalid_argument("annulus_p0: nonpositive denominator");
  return Rational(d) / den;
}

Rational default_p_kd(int d) {
  if (d <= 2) throw std::invalid_argument("default p_kd needs d > 2");
  return make_rational(d, d - 2);
}

SufficientExponents sufficient_r_and_p(Family family, int d, int k, int ell, const Rational& delta0,
                                       const Rational& p_kd) {
  SufficientExponents out;
  out.r0 = r0(ell, delta0);
  out.p0 = p0(d, k, delta0);
  const Rational rc = critical_r(family == Family::prime_sphere ? Family::prime_sphere : Family::sphere, d, k, ell);
  out.sphere_threshold = out.r0 > rc ? out.r0 : rc;
  out.prime_threshold = prime_r_threshold(ell, p_kd);
  return out;
}

ExponentRegion exponent_region(Family family, int d, int k, const std::optional<Rational>& theta) {
  ExponentRegion reg;
  reg.family = family;
  reg.d = d;
  reg.k = k;
  reg.theta = theta;
  reg.threshold = 1 / critical_r(family, d, k, 2, theta);
  reg.full_square = reg.threshold >= 2;
  const Rational zero(0), one(1);
  if (reg.full_square) {
    reg.vertices = {{zero, zero}, {one, zero}, {one, one}, {zero, one}};
  } else {
    const Rational t1 = reg.threshold - 1;
    reg.vertices = {{zero, zero}, {one, zero}, {one, t1}, {t1, one}, {zero, one}};
  }
  return reg;
}

std::string ExponentRegion::str() const {
  std::ostringstream os;
  os << to_string(family) << " d=" << d << " k=" << k;
  if (theta) os << " theta=" << to_string(*theta);
  os << " 1/p+1/q<" << to_string(threshold) << " vertices=";
  for (const auto& [a, b] : vertices) os << "(" << to_string(a) << "," << to_string(b) << ")";
  return os.str();
}

bool region_contains(const ExponentRegion& region, const Rational& a, const Rational& b,
                     const std::optional<Rational>& r, bool strict) {
  if (a < 0 || b < 0 || a > 1 || b > 1) return false;
  const Rational s = a + b;
  if (strict) {
    if (a >= 1 || b >= 1) return false;
    if (!region.full_square && s >= region.threshold) return false;
  } else if (!region.full_square && s > region.threshold) {
    return false;
  }
  if (r) {
    if (*r <= 0) return false;
    const Rational inv = 1 / *r;
    if (s < inv) return false;
    if (strict ? inv >= region.threshold : inv > region.threshold) return false;
  }
  return true;
}

}  // namespace dmslice::exponents
