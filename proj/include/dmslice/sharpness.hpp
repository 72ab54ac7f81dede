#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dmslice/lattice.hpp"
#include "dmslice/power_product.hpp"
#include "dmslice/surface.hpp"

namespace dmslice::sharpness {

/// The Dirac-delta lower-bound term at x != 0 with lambda = l h(x):
///   (T*(delta, ..., delta)(x))^r >= (l h(x))^(-phi r)
/// times (prod_j log x_j)^(l r) for prime spheres.  Zero when x is not
/// admissible (prime families: x a prime vector with h(x) in every slot class
/// and l h(x) in the ambient one).
Value delta_summand(const SurfaceSpec& spec, const Rational& r, const LatticePoint& x);

/// Sum of delta_summand over 0 < h(x) <= R^k.
Real delta_partial_sum(const SurfaceSpec& spec, const Rational& r, std::int64_t R);

enum class Verdict { convergent, divergent, inconclusive };
std::string to_string(Verdict v);

struct ShellEvidence {
  std::vector<std::int64_t> radii;
  std::vector<Real> shells;  // shells[i]: R_i < |x| <= R_{i+1}
  std::vector<Real> ratios;  // shells[i+1] / shells[i]
  std::vector<Real> partial; // partial[i]: 0 < |x| <= R_i
  Verdict verdict = Verdict::inconclusive;
};

/// convergent: every ratio < 0.9.  divergent: every ratio > 0.97 and every
/// shell >= half the first.  Otherwise inconclusive.
Verdict classify_shells(const std::vector<Real>& shells, std::vector<Real>* ratios = nullptr);

/// Shell sums of |x|^(-s) over Z^d (Euclidean norm).
ShellEvidence classify_power_sum(int d, const Rational& s, const std::vector<std::int64_t>& radii);

/// Shell sums of the family's delta series at exponent r.
ShellEvidence family_shells(const SurfaceSpec& spec, const Rational& r, const std::vector<std::int64_t>& radii);

/// R, 2R, ... with R^k small enough for exact shell counting.
std::vector<std::int64_t> default_radii(int k);

struct CriticalEstimate {
  std::optional<Rational> lower;  // largest r classified divergent
  std::optional<Rational> upper;  // smallest r classified convergent
  bool one_sided = false;
  std::vector<std::pair<Rational, ShellEvidence>> rows;
  std::string str() const;
};

/// Throws std::invalid_argument when no r in the grid is classified.
CriticalEstimate estimate_critical_exponent(const SurfaceSpec& spec, const std::vector<Rational>& r_grid,
                                            const std::vector<std::int64_t>& radii);

/// family,d,k,ell,theta,r,R,partial_sum,shell_ratio,verdict
std::string csv(const SurfaceSpec& spec, const CriticalEstimate& estimate);

}  // namespace dmslice::sharpness
