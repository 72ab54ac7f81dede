#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dmslice/arith.hpp"
#include "dmslice/surface.hpp"

namespace dmslice::exponents {

/// Necessary lower bound r_c on the target exponent r:
///   ball 1/l,  sphere and prime sphere d/(ld - k),  annulus d/(ld - 2 + 2 theta).
Rational critical_r(Family family, int d, int k, int ell, const std::optional<Rational>& theta = std::nullopt);

/// (2 + 2 delta0) / ((l - 1)(2 + 2 delta0) + (1 + 2 delta0))
Rational r0(int ell, const Rational& delta0);
/// max{1 + 1/(1 + 2 delta0), d/(d - k)};  requires d > k.
Rational p0(int d, int k, const Rational& delta0);
/// p/((l - 1) p + 1) for the prime-sphere range r > p_{k,d}/((l-1)p_{k,d}+1).
Rational prime_r_threshold(int ell, const Rational& p_kd);
/// d/(d - 2 + 2 theta): the linear annular range.
Rational annulus_p0(int d, const Rational& theta);
/// Default p_{2,d} = d/(d - 2).
Rational default_p_kd(int d);

struct SufficientExponents {
  Rational r0;
  Rational p0;
  Rational sphere_threshold;  // max{r0, d/(ld - k)}
  Rational prime_threshold;
};

SufficientExponents sufficient_r_and_p(Family family, int d, int k, int ell, const Rational& delta0,
                                       const Rational& p_kd);

/// Bilinear boundedness region in the (1/p, 1/q) square:
///   0 <= 1/p, 1/q < 1  and  1/p + 1/q < threshold,  threshold = 1/r_c.
struct ExponentRegion {
  Family family = Family::ball;
  int d = 1;
  int k = 2;
  std::optional<Rational> theta;
  Rational threshold;
  bool full_square = false;
  /// Counter-clockwise from the origin.
  std::vector<std::pair<Rational, Rational>> vertices;
  std::string str() const;
};

ExponentRegion exponent_region(Family family, int d, int k, const std::optional<Rational>& theta = std::nullopt);

/// Membership of (a, b) = (1/p, 1/q).  strict: open on the critical lines and
/// on 1/p = 1, 1/q = 1.  When r is given, additionally requires a + b >= 1/r
/// and r above the critical exponent (r >= r_c when not strict).
bool region_contains(const ExponentRegion& region, const Rational& a, const Rational& b,
                     const std::optional<Rational>& r = std::nullopt, bool strict = true);

}  // namespace dmslice::exponents
