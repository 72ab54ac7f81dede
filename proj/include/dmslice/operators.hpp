#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dmslice/grid_function.hpp"
#include "dmslice/power_product.hpp"
#include "dmslice/surface.hpp"

namespace dmslice {

/// Divide by the surface size, or by lambda^phi.
struct NormalizationMode {
  enum class Kind { exact_count, power_law };
  Kind kind = Kind::power_law;
  Rational phi{0};

  static NormalizationMode exact_count() { return {Kind::exact_count, Rational(0)}; }
  static NormalizationMode power_law(const Rational& phi);
  std::string str() const;
};

/// Truncation of the supremum and its normalization.
struct MaximalConfig {
  std::vector<std::int64_t> lambdas;  // strictly increasing
  NormalizationMode normalization;
  /// Admit lambda = 0 with normalization 1 (only meaningful for level sets).
  bool allow_zero = false;

  static MaximalConfig range(std::int64_t lo, std::int64_t hi, NormalizationMode norm);
  std::int64_t max_lambda() const { return lambdas.back(); }
  /// Throws std::invalid_argument naming `lambdas`.
  void validate() const;
};

/// T_lambda(f_1, ..., f_l)(x) by direct summation over the supports.  Zero
/// when the surface is empty.
Value multilinear_average(const SurfaceSpec& spec, const std::vector<GridFunction>& fs, std::int64_t lambda,
                          const NormalizationMode& norm, const LatticePoint& x);

/// Smallest box outside which every average over config.lambdas vanishes.
Box default_box(const SurfaceSpec& spec, const std::vector<GridFunction>& fs, std::int64_t max_lambda);

/// max over config.lambdas of multilinear_average at every point of `box`.
ValueField maximal_function(const SurfaceSpec& spec, const std::vector<GridFunction>& fs, const MaximalConfig& config,
                            const std::optional<Box>& box = std::nullopt);

/// Linear maximal operators used as slicing factors.
struct LinearKind {
  enum class Type { hl_ball, sphere, annulus, shifted_annulus, prime_hl, prime_sphere };
  Type type = Type::hl_ball;
  int k = 2;
  Rational theta{1, 2};
  Rational width_multiplier{1};
  std::optional<Progression> progression;  // prime kinds: the slot class of |p|^k
  PrimeWeighting weighting = PrimeWeighting::logarithmic;

  static LinearKind hl_ball(int k) { return {Type::hl_ball, k, Rational(1, 2), Rational(1), {}, {}}; }
  static LinearKind sphere(int k) { return {Type::sphere, k, Rational(1, 2), Rational(1), {}, {}}; }
  static LinearKind annulus(const Rational& theta, const Rational& w = Rational(1)) {
    return {Type::annulus, 2, theta, w, {}, {}};
  }
  static LinearKind shifted_annulus(const Rational& theta, const Rational& w = Rational(1)) {
    return {Type::shifted_annulus, 2, theta, w, {}, {}};
  }
  static LinearKind prime_hl(int k, std::optional<Progression> slot, PrimeWeighting w = PrimeWeighting::logarithmic) {
    return {Type::prime_hl, k, Rational(1, 2), Rational(1), std::move(slot), w};
  }
  static LinearKind prime_sphere(int k, std::optional<Progression> slot,
                                 PrimeWeighting w = PrimeWeighting::logarithmic) {
    return {Type::prime_sphere, k, Rational(1, 2), Rational(1), std::move(slot), w};
  }

  /// The normalization exponent for functions on Z^d.
  Rational phi(int d) const;
  std::string str() const;
};

/// Linear maximal function of f with the kind's power-law normalization.
/// shifted_annulus takes the sup over (lambda, b), 0 <= b <= lambda, of
///   lambda^(1 - theta - d/2) * sum_{b - w lambda^theta < |u|^2 <= b} f(x - u).
ValueField linear_maximal(const LinearKind& kind, const GridFunction& f, const std::vector<std::int64_t>& lambdas,
                          const Box& box, bool allow_zero = false);

/// max over trials of ||T*(f_1..f_l)||_r / prod ||f_i||_{p_i}.
struct ProbeExponents {
  std::vector<LpExponent> p;
  LpExponent r;
};
/// Exact when every norm involved is exact.
Value ratio_norm_probe(const SurfaceSpec& spec, const ProbeExponents& exps,
                       const std::vector<std::vector<GridFunction>>& trials, const MaximalConfig& config,
                       const std::optional<Box>& box = std::nullopt);

}  // namespace dmslice
