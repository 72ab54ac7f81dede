#include "dmslice/sharpness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dmslice/parallel.hpp"
#include "dmslice/primes.hpp"

namespace dmslice::sharpness {

namespace {

void check_family(const SurfaceSpec& spec) {
  spec.validate();
  if (spec.family == Family::ball || spec.family == Family::sphere || spec.family == Family::annulus ||
      spec.family == Family::prime_sphere)
    return;
  throw std::invalid_argument("family: sharpness series defined for ball, sphere, annulus and prime_sphere");
}

bool admissible_level(const SurfaceSpec& spec, std::int64_t mu) {
  if (!spec.is_prime()) return true;
  for (int i = 0; i < spec.ell; ++i)
    if (!spec.slot_progression(i).contains(mu)) return false;
  return spec.ambient_progression().contains(checked_mul(spec.ell, mu));
}

// w[mu] = sum over admissible x with h(x) = mu of the non-power part of the
// summand: 1 for lattice families, (prod log x_j)^(l r) for prime spheres.
std::vector<Real> level_weights(const SurfaceSpec& spec, const Rational& r, std::int64_t max_mu) {
  const auto M = static_cast<std::size_t>(max_mu);
  std::vector<Real> w(M + 1, 0);
  if (!spec.is_prime()) {
    std::vector<std::int64_t> steps;
    for (std::int64_t j = 1;; ++j) {
      const std::int64_t p = ipow(j, static_cast<unsigned>(spec.k));
      if (p > max_mu) break;
      steps.push_back(p);
    }
    std::vector<std::int64_t> t(M + 1, 0), next;
    t[0] = 1;
    for (std::int64_t p : steps) t[static_cast<std::size_t>(p)] = 2;
    for (int dim = 2; dim <= spec.d; ++dim) {
      next.assign(M + 1, 0);
      for (std::size_t m = 0; m <= M; ++m) {
        if (!t[m]) continue;
        next[m] = checked_add(next[m], t[m]);
        for (std::int64_t p : steps) {
          const std::size_t to = m + static_cast<std::size_t>(p);
          if (to > M) break;
          next[to] = checked_add(next[to], 2 * t[m]);
        }
      }
      t.swap(next);
    }
    for (std::size_t m = 0; m <= M; ++m) w[m] = static_cast<Real>(t[m]);
    return w;
  }
  const Real power = to_real(r) * spec.ell;
  const bool unit = spec.weighting == PrimeWeighting::unit;
  std::vector<std::pair<std::int64_t, Real>> per_coord;
  for (std::int64_t p : primes::sieve(iroot(max_mu, static_cast<unsigned>(spec.k))))
    per_coord.emplace_back(ipow(p, static_cast<unsigned>(spec.k)), unit ? 1 : std::pow(std::log(static_cast<Real>(p)), power));
  std::vector<Real> t(M + 1, 0);
  t[0] = 1;
  for (int dim = 1; dim <= spec.d; ++dim) {
    std::vector<Real> next(M + 1, 0);
    for (std::size_t m = 0; m <= M; ++m) {
      if (t[m] == 0) continue;
      for (auto [pk, lw] : per_coord) {
        const std::size_t to = m + static_cast<std::size_t>(pk);
        if (to > M) break;
        next[to] += t[m] * lw;
      }
    }
    t.swap(next);
  }
  for (std::size_t m = 0; m <= M; ++m)
    if (admissible_level(spec, static_cast<std::int64_t>(m))) w[m] = t[m];
  return w;
}

Real term(const SurfaceSpec& spec, const Real& exponent, std::int64_t mu) {
  return std::pow(static_cast<Real>(spec.ell) * static_cast<Real>(mu), -exponent);
}

void check_radii(const std::vector<std::int64_t>& radii) {
  if (radii.size() < 3) throw std::invalid_argument("radii: need at least three radii");
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (radii[i] < 1 || (i && radii[i] <= radii[i - 1])) throw std::invalid_argument("radii: must increase from >= 1");
}

}  // namespace

Value delta_summand(const SurfaceSpec& spec, const Rational& r, const LatticePoint& x) {
  check_family(spec);
  if (r <= 0) throw std::invalid_argument("r: must be positive");
  if (static_cast<int>(x.dim()) != spec.d) throw std::invalid_argument("point dimension does not match d");
  const std::int64_t mu = power_norm(x, static_cast<unsigned>(spec.k));
  if (mu == 0) throw std::invalid_argument("delta summand is defined for x != 0");
  const Rational lambda(static_cast<long>(checked_mul(spec.ell, mu)));
  const PowerProduct base = PowerProduct::power(lambda, -spec.default_phi() * r);
  if (!spec.is_prime()) return Value(base);
  for (std::int64_t c : x.coords())
    if (c < 2 || primes::sieve(c).back() != c) return Value();
  if (!admissible_level(spec, mu)) return Value();
  if (spec.weighting == PrimeWeighting::unit) return Value(base);
  Real logs = 1;
  for (std::int64_t c : x.coords()) logs *= std::log(static_cast<Real>(c));
  return Value::approximate(base.approx() * std::pow(logs, to_real(r) * spec.ell));
}

Real delta_partial_sum(const SurfaceSpec& spec, const Rational& r, std::int64_t R) {
  check_family(spec);
  if (r <= 0) throw std::invalid_argument("r: must be positive");
  if (R <= 0) return 0;
  const std::int64_t M = ipow(R, static_cast<unsigned>(spec.k));
  const auto w = level_weights(spec, r, M);
  const Real e = to_real(spec.default_phi() * r);
  Real sum = 0;
  for (std::int64_t mu = 1; mu <= M; ++mu)
    if (w[static_cast<std::size_t>(mu)] != 0) sum += w[static_cast<std::size_t>(mu)] * term(spec, e, mu);
  return sum;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::convergent: return "convergent";
    case Verdict::divergent: return "divergent";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict classify_shells(const std::vector<Real>& shells, std::vector<Real>* ratios) {
  std::vector<Real> rs;
  for (std::size_t i = 1; i < shells.size(); ++i)
    rs.push_back(shells[i - 1] > 0 ? shells[i] / shells[i - 1] : std::numeric_limits<Real>::infinity());
  if (ratios) *ratios = rs;
  if (rs.empty() || shells.front() <= 0) return Verdict::inconclusive;
  if (std::all_of(rs.begin(), rs.end(), [](Real q) { return q < 0.9L; })) return Verdict::convergent;
  const bool flat = std::all_of(rs.begin(), rs.end(), [](Real q) { return q > 0.97L; }) &&
                    std::all_of(shells.begin(), shells.end(), [&](Real s) { return s >= 0.5L * shells.front(); });
  return flat ? Verdict::divergent : Verdict::inconclusive;
}

ShellEvidence classify_power_sum(int d, const Rational& s, const std::vector<std::int64_t>& radii) {
  check_radii(radii);
  if (s <= 0) throw std::invalid_argument("s: must be positive");
  const std::int64_t M = radii.back() * radii.back();
  const auto counts = lattice::sphere_count_table(d, 2, M);
  const Real half = to_real(s) / 2;
  ShellEvidence ev;
  ev.radii = radii;
  ev.shells.assign(radii.size() - 1, 0);
  parallel::for_each_index(ev.shells.size(), [&](std::size_t i) {
    Real sum = 0;
    for (std::int64_t mu = radii[i] * radii[i] + 1; mu <= radii[i + 1] * radii[i + 1]; ++mu)
      if (counts[static_cast<std::size_t>(mu)] != 0)
        sum += to_real(counts[static_cast<std::size_t>(mu)]) * std::pow(static_cast<Real>(mu), -half);
    ev.shells[i] = sum;
  });
  Real run = 0;
  for (std::int64_t mu = 1; mu <= M; ++mu) {
    if (counts[static_cast<std::size_t>(mu)] != 0)
      run += to_real(counts[static_cast<std::size_t>(mu)]) * std::pow(static_cast<Real>(mu), -half);
    for (std::size_t i = 0; i < radii.size(); ++i)
      if (mu == radii[i] * radii[i]) ev.partial.push_back(run);
  }
  ev.verdict = classify_shells(ev.shells, &ev.ratios);
  return ev;
}

ShellEvidence family_shells(const SurfaceSpec& spec, const Rational& r, const std::vector<std::int64_t>& radii) {
  check_family(spec);
  check_radii(radii);
  if (r <= 0) throw std::invalid_argument("r: must be positive");
  const auto k = static_cast<unsigned>(spec.k);
  const std::int64_t M = ipow(radii.back(), k);
  const auto w = level_weights(spec, r, M);
  const Real e = to_real(spec.default_phi() * r);
  ShellEvidence ev;
  ev.radii = radii;
  ev.shells.assign(radii.size() - 1, 0);
  parallel::for_each_index(ev.shells.size(), [&](std::size_t i) {
    Real sum = 0;
    for (std::int64_t mu = ipow(radii[i], k) + 1; mu <= ipow(radii[i + 1], k); ++mu)
      if (w[static_cast<std::size_t>(mu)] != 0) sum += w[static_cast<std::size_t>(mu)] * term(spec, e, mu);
    ev.shells[i] = sum;
  });
  Real inner = 0;
  for (std::int64_t mu = 1; mu <= ipow(radii[0], k); ++mu)
    if (w[static_cast<std::size_t>(mu)] != 0) inner += w[static_cast<std::size_t>(mu)] * term(spec, e, mu);
  ev.partial.push_back(inner);
  for (Real s : ev.shells) ev.partial.push_back(ev.partial.back() + s);
  ev.verdict = classify_shells(ev.shells, &ev.ratios);
  return ev;
}

std::vector<std::int64_t> default_radii(int k) {
  std::int64_t top = 1;
  while (top < 128 && ipow(2 * top, static_cast<unsigned>(k)) <= (std::int64_t{1} << 15)) top *= 2;
  std::vector<std::int64_t> out;
  for (std::int64_t R = std::max<std::int64_t>(1, top / 16); R <= top; R *= 2) out.push_back(R);
  return out;
}

CriticalEstimate estimate_critical_exponent(const SurfaceSpec& spec, const std::vector<Rational>& r_grid,
                                            const std::vector<std::int64_t>& radii) {
  if (r_grid.empty()) throw std::invalid_argument("r_grid: empty");
  CriticalEstimate est;
  std::vector<Rational> grid = r_grid;
  std::sort(grid.begin(), grid.end());
  for (const auto& r : grid) {
    ShellEvidence ev = family_shells(spec, r, radii);
    if (ev.verdict == Verdict::divergent && (!est.lower || r > *est.lower)) est.lower = r;
    if (ev.verdict == Verdict::convergent && (!est.upper || r < *est.upper)) est.upper = r;
    est.rows.emplace_back(r, std::move(ev));
  }
  if (!est.lower && !est.upper) throw std::invalid_argument("r_grid: every exponent is inconclusive");
  est.one_sided = !est.lower || !est.upper;
  return est;
}

std::string CriticalEstimate::str() const {
  std::ostringstream os;
  os << "[" << (lower ? dmslice::to_string(*lower) : "-") << ", " << (upper ? dmslice::to_string(*upper) : "-") << "]";
  if (one_sided) os << " one-sided";
  return os.str();
}

std::string csv(const SurfaceSpec& spec, const CriticalEstimate& estimate) {
  std::ostringstream os;
  os.precision(12);
  os << "family,d,k,ell,theta,r,R,partial_sum,shell_ratio,verdict\n";
  for (const auto& [r, ev] : estimate.rows) {
    for (std::size_t i = 0; i < ev.radii.size(); ++i) {
      os << dmslice::to_string(spec.family) << ',' << spec.d << ',' << spec.k << ',' << spec.ell << ','
         << (spec.theta ? dmslice::to_string(*spec.theta) : "") << ',' << dmslice::to_string(r) << ',' << ev.radii[i]
         << ',' << ev.partial[i] << ',';
      if (i >= 2) os << ev.ratios[i - 2];
      os << ',' << to_string(ev.verdict) << '\n';
    }
  }
  return os.str();
}

}  // namespace dmslice::sharpness
