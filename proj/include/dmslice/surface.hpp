#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmslice/arith.hpp"
#include "dmslice/power_product.hpp"
#include "dmslice/primes.hpp"
#include "dmslice/progression.hpp"

namespace dmslice {

enum class Family { ball, sphere, annulus, prime_sphere, prime_ball, general_additive };

std::string to_string(Family f);
Family parse_family(std::string_view name);

/// Per-slot progressions Gamma^i (one per factor) and the ambient Gamma for lambda.
struct ProgressionConstraints {
  std::vector<Progression> slots;
  Progression ambient;

  static ProgressionConstraints unrestricted(int ell) {
    return {std::vector<Progression>(static_cast<std::size_t>(ell), Progression::all()), Progression::all()};
  }
};

/// One additive piece h_i of a general additive surface.
struct ComponentSpec {
  int d = 1;
  int k = 2;
  Family family = Family::sphere;  // sphere: integer coordinates; prime_sphere: positive primes
};

/// The surface an l-linear operator averages over:
///   ball            sum_i h(u_i) <= lambda
///   sphere          sum_i h(u_i)  = lambda
///   annulus         lambda - w*lambda^theta < sum_i |u_i|^2 <= lambda
///   prime_sphere    sum_i h(p_i)  = lambda, p_i prime vectors
///   prime_ball      sum_i h(p_i) <= lambda
/// with h(u) = sum_j |u_j|^k.
struct SurfaceSpec {
  Family family = Family::ball;
  int d = 1;
  int k = 2;
  int ell = 1;
  std::optional<Rational> theta;
  Rational width_multiplier{1};
  std::optional<ProgressionConstraints> progressions;
  std::vector<ComponentSpec> components;
  PrimeWeighting weighting = PrimeWeighting::logarithmic;

  static SurfaceSpec ball(int d, int k, int ell);
  static SurfaceSpec sphere(int d, int k, int ell);
  static SurfaceSpec annulus(int d, Rational theta, int ell);
  static SurfaceSpec prime_sphere(int d, int k, int ell, ProgressionConstraints pc);
  static SurfaceSpec prime_ball(int d, int k, int ell, ProgressionConstraints pc);

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  bool is_prime() const { return family == Family::prime_sphere || family == Family::prime_ball; }
  /// Cumulative surfaces (balls) versus level sets.
  bool is_ball_like() const { return family == Family::ball || family == Family::prime_ball; }

  /// Exponent phi of the power-law normalization lambda^(-phi):
  ///   ball l*d/k,  sphere and prime sphere l*d/k - 1,  annulus l*d/2 - 1 + theta.
  Rational default_phi() const;

  /// The same surface with a different linearity.
  SurfaceSpec with_ell(int new_ell) const;

  const Progression& slot_progression(int slot) const;
  const Progression& ambient_progression() const;

  std::string describe() const;
};

/// Sizes of the l*d-dimensional surface: B(lambda), N(lambda), A(lambda), or
/// the weighted P(lambda) (slot progressions applied) for lambda <= max_lambda.
class SurfaceCounter {
 public:
  SurfaceCounter(const SurfaceSpec& spec, std::int64_t max_lambda);

  /// Exact count for integer families and unit-weight prime families, Real
  /// for logarithmic weights.  Zero outside the ambient progression.
  Value size(std::int64_t lambda) const;
  std::int64_t max_lambda() const { return max_lambda_; }

 private:
  SurfaceSpec spec_;
  std::int64_t max_lambda_;
  std::vector<BigInt> level_counts_;  // integer families: l*d-dim level-set counts
  std::vector<Real> level_weights_;   // prime families
  std::vector<BigInt> prime_counts_;
};

struct AsymptoticDiagnostic {
  std::vector<std::int64_t> lambdas;
  std::vector<Value> counts;
  Rational phi;
  std::vector<Real> ratios;  // count / lambda^phi
  /// max over the top half of the range of |ratio_i / ratio_last - 1|; 0 when
  /// every ratio vanishes.
  Real stabilization = 0;
};

/// Surface sizes against lambda^phi.  lambdas must be strictly increasing and
/// non-empty.
AsymptoticDiagnostic asymptotic_diagnostic(const SurfaceSpec& spec, const std::vector<std::int64_t>& lambdas,
                                           const Rational& phi);

}  // namespace dmslice
