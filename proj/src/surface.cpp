#include "dmslice/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dmslice/lattice.hpp"

namespace dmslice {

std::string to_string(Family f) {
  switch (f) {
    case Family::ball: return "ball";
    case Family::sphere: return "sphere";
    case Family::annulus: return "annulus";
    case Family::prime_sphere: return "prime_sphere";
    case Family::prime_ball: return "prime_ball";
    case Family::general_additive: return "general_additive";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::ball, Family::sphere, Family::annulus, Family::prime_sphere, Family::prime_ball,
                   Family::general_additive})
    if (to_string(f) == name) return f;
  throw std::invalid_argument("family: unknown surface family '" + std::string(name) + "'");
}

SurfaceSpec SurfaceSpec::ball(int d, int k, int ell) {
  SurfaceSpec s;
  s.family = Family::ball;
  s.d = d;
  s.k = k;
  s.ell = ell;
  return s;
}

SurfaceSpec SurfaceSpec::sphere(int d, int k, int ell) {
  SurfaceSpec s = ball(d, k, ell);
  s.family = Family::sphere;
  return s;
}

SurfaceSpec SurfaceSpec::annulus(int d, Rational theta, int ell) {
  SurfaceSpec s = ball(d, 2, ell);
  s.family = Family::annulus;
  s.theta = std::move(theta);
  return s;
}

SurfaceSpec SurfaceSpec::prime_sphere(int d, int k, int ell, ProgressionConstraints pc) {
  SurfaceSpec s = ball(d, k, ell);
  s.family = Family::prime_sphere;
  s.progressions = std::move(pc);
  return s;
}

SurfaceSpec SurfaceSpec::prime_ball(int d, int k, int ell, ProgressionConstraints pc) {
  SurfaceSpec s = prime_sphere(d, k, ell, std::move(pc));
  s.family = Family::prime_ball;
  return s;
}

void SurfaceSpec::validate() const {
  if (d < 1) throw std::invalid_argument("d: dimension must be >= 1");
  if (ell < 1) throw std::invalid_argument("ell: linearity must be >= 1");
  const int min_k = family == Family::ball ? 1 : 2;
  if (k < min_k) throw std::invalid_argument("k: degree must be >= " + std::to_string(min_k) + " for " + to_string(family));
  if (family == Family::annulus) {
    if (!theta) throw std::invalid_argument("theta: required for the annulus family");
    if (*theta <= 0 || *theta >= 1) throw std::invalid_argument("theta: must satisfy 0 < theta < 1");
    if (k != 2) throw std::invalid_argument("k: the annulus family uses k = 2");
    if (width_multiplier <= 0) throw std::invalid_argument("width_multiplier: must be positive");
  } else if (theta) {
    throw std::invalid_argument("theta: only meaningful for the annulus family");
  }
  if (is_prime()) {
    if (!progressions) throw std::invalid_argument("progressions: required for prime families");
    if (static_cast<int>(progressions->slots.size()) != ell)
      throw std::invalid_argument("progressions: need exactly ell slot progressions");
  } else if (progressions) {
    throw std::invalid_argument("progressions: only meaningful for prime families");
  }
  if (family == Family::general_additive) {
    if (static_cast<int>(components.size()) != ell)
      throw std::invalid_argument("components: general_additive needs one component per slot");
  }
}

Rational SurfaceSpec::default_phi() const {
  const Rational ld(static_cast<long>(ell) * d);
  switch (family) {
    case Family::ball:
    case Family::prime_ball: return ld / k;
    case Family::sphere:
    case Family::prime_sphere: return ld / k - 1;
    case Family::annulus: return ld / 2 - 1 + *theta;
    case Family::general_additive: break;
  }
  throw std::invalid_argument("family: no default normalization for general_additive");
}

SurfaceSpec SurfaceSpec::with_ell(int new_ell) const {
  SurfaceSpec s = *this;
  s.ell = new_ell;
  if (progressions) {
    s.progressions->slots.resize(static_cast<std::size_t>(new_ell), Progression::all());
  }
  return s;
}

const Progression& SurfaceSpec::slot_progression(int slot) const {
  static const Progression all = Progression::all();
  if (!progressions) return all;
  return progressions->slots.at(static_cast<std::size_t>(slot));
}

const Progression& SurfaceSpec::ambient_progression() const {
  static const Progression all = Progression::all();
  if (!progressions) return all;
  return progressions->ambient;
}

std::string SurfaceSpec::describe() const {
  std::ostringstream os;
  os << to_string(family) << "(d=" << d << ",k=" << k << ",ell=" << ell;
  if (theta) os << ",theta=" << to_string(*theta);
  if (width_multiplier != 1) os << ",w=" << to_string(width_multiplier);
  if (progressions) {
    os << ",slots=[";
    for (std::size_t i = 0; i < progressions->slots.size(); ++i) os << (i ? ";" : "") << progressions->slots[i].str();
    os << "],ambient=" << progressions->ambient.str();
  }
  if (is_prime()) os << ",weights=" << (weighting == PrimeWeighting::unit ? "unit" : "log");
  os << ")";
  return os.str();
}

SurfaceCounter::SurfaceCounter(const SurfaceSpec& spec, std::int64_t max_lambda)
    : spec_(spec), max_lambda_(max_lambda) {
  spec_.validate();
  if (max_lambda < 0) throw std::invalid_argument("max_lambda must be >= 0");
  const auto L = static_cast<std::size_t>(max_lambda);
  if (!spec_.is_prime()) {
    if (spec_.family == Family::general_additive) throw std::invalid_argument("family: cannot count general_additive");
    level_counts_ = lattice::sphere_count_table(spec_.ell * spec_.d, spec_.k, max_lambda);
    return;
  }
  // Convolve the per-slot tables; each slot keeps only mu in its progression.
  level_weights_.assign(L + 1, 0);
  prime_counts_.assign(L + 1, 0);
  level_weights_[0] = 1;
  prime_counts_[0] = 1;
  for (int slot = 0; slot < spec_.ell; ++slot) {
    auto t = primes::prime_sphere_table(spec_.d, spec_.k, max_lambda, spec_.weighting, spec_.slot_progression(slot));
    std::vector<Real> w(L + 1, 0);
    std::vector<BigInt> c(L + 1, 0);
    for (std::size_t a = 0; a <= L; ++a) {
      if (prime_counts_[a] == 0) continue;
      for (std::size_t b = 0; a + b <= L; ++b) {
        if (t.count[b] == 0) continue;
        w[a + b] += level_weights_[a] * t.weight[b];
        c[a + b] += prime_counts_[a] * t.count[b];
      }
    }
    level_weights_.swap(w);
    prime_counts_.swap(c);
  }
}

Value SurfaceCounter::size(std::int64_t lambda) const {
  if (lambda < 0 || lambda > max_lambda_) throw std::out_of_range("lambda outside the counter range");
  const auto i = static_cast<std::size_t>(lambda);
  switch (spec_.family) {
    case Family::sphere: return PowerProduct(Rational(level_counts_[i]));
    case Family::ball: {
      BigInt total = 0;
      for (std::size_t mu = 0; mu <= i; ++mu) total += level_counts_[mu];
      return PowerProduct(Rational(total));
    }
    case Family::annulus: {
      if (lambda < 1) return PowerProduct();
      const std::int64_t slack = lattice::annulus_slack(lambda, *spec_.theta, spec_.width_multiplier);
      BigInt total = 0;
      for (std::int64_t mu = std::max<std::int64_t>(0, lambda - slack); mu <= lambda; ++mu)
        total += level_counts_[static_cast<std::size_t>(mu)];
      return PowerProduct(Rational(total));
    }
    case Family::prime_sphere:
    case Family::prime_ball: {
      if (!spec_.ambient_progression().contains(lambda)) return PowerProduct();
      const std::size_t lo = spec_.family == Family::prime_ball ? 0 : i;
      if (spec_.weighting == PrimeWeighting::unit) {
        BigInt total = 0;
        for (std::size_t mu = lo; mu <= i; ++mu) total += prime_counts_[mu];
        return PowerProduct(Rational(total));
      }
      Real total = 0;
      for (std::size_t mu = lo; mu <= i; ++mu) total += level_weights_[mu];
      return Value::approximate(total);
    }
    case Family::general_additive: break;
  }
  throw std::logic_error("unreachable");
}

AsymptoticDiagnostic asymptotic_diagnostic(const SurfaceSpec& spec, const std::vector<std::int64_t>& lambdas,
                                           const Rational& phi) {
  if (lambdas.empty()) throw std::invalid_argument("lambdas: empty sequence");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (lambdas[i] <= lambdas[i - 1]) throw std::invalid_argument("lambdas: must be strictly increasing");
  if (lambdas.front() < 1) throw std::invalid_argument("lambdas: must be >= 1");
  AsymptoticDiagnostic diag;
  diag.lambdas = lambdas;
  diag.phi = phi;
  const SurfaceCounter counter(spec, lambdas.back());
  const Real e = to_real(phi);
  for (std::int64_t l : lambdas) {
    Value c = counter.size(l);
    diag.ratios.push_back(c.approx() / std::pow(static_cast<Real>(l), e));
    diag.counts.push_back(std::move(c));
  }
  const Real last = diag.ratios.back();
  const std::size_t half = diag.ratios.size() / 2;
  for (std::size_t i = half; i < diag.ratios.size(); ++i) {
    const Real r = diag.ratios[i];
    if (last == 0) {
      if (r != 0) diag.stabilization = std::numeric_limits<Real>::infinity();
      continue;
    }
    diag.stabilization = std::max(diag.stabilization, std::fabs(r / last - 1));
  }
  return diag;
}

}  // namespace dmslice
