#include "dmslice/primes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dmslice::primes {

std::vector<std::int64_t> sieve(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 2) return out;
  std::vector<char> composite(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t i = 2; i * i <= n; ++i)
    if (!composite[static_cast<std::size_t>(i)])
      for (std::int64_t j = i * i; j <= n; j += i) composite[static_cast<std::size_t>(j)] = 1;
  for (std::int64_t i = 2; i <= n; ++i)
    if (!composite[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

PrimeLookup::PrimeLookup(std::int64_t limit) : limit_(std::max<std::int64_t>(limit, 1)) {
  flags_.assign(static_cast<std::size_t>(limit_) + 1, 0);
  for (std::int64_t p : sieve(limit_)) flags_[static_cast<std::size_t>(p)] = 1;
}

namespace {

void check_prime_args(int d, int k) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (k < 1) throw std::invalid_argument("degree must be >= 1");
}

struct PrimePower {
  std::int64_t prime;
  std::int64_t power;
  Real log;
};

std::vector<PrimePower> prime_powers_up_to(int k, std::int64_t limit) {
  std::vector<PrimePower> out;
  if (limit < 2) return out;
  for (std::int64_t p : sieve(iroot(limit, static_cast<unsigned>(k)))) {
    out.push_back({p, ipow(p, static_cast<unsigned>(k)), std::log(static_cast<Real>(p))});
  }
  return out;
}

void walk_primes(const std::vector<PrimePower>& pp, int d, int depth, std::int64_t remaining,
                 std::vector<std::int64_t>& current, Real weight, std::vector<WeightedPoint>& out) {
  if (depth == d) {
    if (remaining == 0) out.push_back({LatticePoint(current), weight});
    return;
  }
  for (const auto& e : pp) {
    if (e.power > remaining) break;
    current[static_cast<std::size_t>(depth)] = e.prime;
    walk_primes(pp, d, depth + 1, remaining - e.power, current, weight * e.log, out);
  }
}

}  // namespace

std::vector<WeightedPoint> enumerate_prime_sphere(int d, int k, std::int64_t lambda) {
  check_prime_args(d, k);
  std::vector<WeightedPoint> out;
  if (lambda < 2) return out;
  auto pp = prime_powers_up_to(k, lambda);
  std::vector<std::int64_t> current(static_cast<std::size_t>(d));
  walk_primes(pp, d, 0, lambda, current, 1.0L, out);
  return out;
}

Real weighted_count(int d, int k, std::int64_t lambda) {
  Real total = 0;
  for (const auto& wp : enumerate_prime_sphere(d, k, lambda)) total += wp.weight;
  return total;
}

PrimeSphereTable prime_sphere_table(int d, int k, std::int64_t max_lambda, PrimeWeighting weighting,
                                    const std::optional<Progression>& slot) {
  check_prime_args(d, k);
  if (max_lambda < 0) throw std::invalid_argument("max_lambda must be >= 0");
  const auto L = static_cast<std::size_t>(max_lambda);
  auto pp = prime_powers_up_to(k, max_lambda);
  PrimeSphereTable t{std::vector<Real>(L + 1, 0), std::vector<BigInt>(L + 1, 0)};
  for (const auto& e : pp) {
    t.weight[static_cast<std::size_t>(e.power)] += weighting == PrimeWeighting::unit ? 1 : e.log;
    t.count[static_cast<std::size_t>(e.power)] += 1;
  }
  for (int dim = 2; dim <= d; ++dim) {
    PrimeSphereTable next{std::vector<Real>(L + 1, 0), std::vector<BigInt>(L + 1, 0)};
    for (std::size_t mu = 0; mu <= L; ++mu) {
      if (t.count[mu] == 0) continue;
      for (const auto& e : pp) {
        const std::size_t to = mu + static_cast<std::size_t>(e.power);
        if (to > L) break;
        next.weight[to] += t.weight[mu] * (weighting == PrimeWeighting::unit ? 1 : e.log);
        next.count[to] += t.count[mu];
      }
    }
    t = std::move(next);
  }
  if (slot) {
    for (std::size_t mu = 0; mu <= L; ++mu) {
      if (!slot->contains(static_cast<std::int64_t>(mu))) {
        t.weight[mu] = 0;
        t.count[mu] = 0;
      }
    }
  }
  return t;
}

bool progression_membership(std::int64_t lambda, const Progression& gamma) { return gamma.contains(lambda); }

SumsetResult sumset_check(std::span<const Progression> gammas, const Progression& ambient) {
  std::int64_t M = ambient.modulus;
  for (const auto& g : gammas) M = lcm64(M, g.modulus);

  // S + (a + mZ) mod M  =  {r : r mod m  in  (S + a) mod m}, since m | M.
  std::vector<char> reached(static_cast<std::size_t>(M), 0);
  reached[0] = 1;
  for (const auto& g : gammas) {
    std::vector<char> hit(static_cast<std::size_t>(g.modulus), 0);
    for (std::int64_t s = 0; s < M; ++s)
      if (reached[static_cast<std::size_t>(s)]) hit[static_cast<std::size_t>((s + g.residue) % g.modulus)] = 1;
    for (std::int64_t r = 0; r < M; ++r) reached[static_cast<std::size_t>(r)] = hit[static_cast<std::size_t>(r % g.modulus)];
  }

  SumsetResult res;
  res.modulus = M;
  std::optional<std::int64_t> extra, missing;
  for (std::int64_t r = 0; r < M; ++r) {
    const bool in_sum = reached[static_cast<std::size_t>(r)] != 0;
    const bool in_ambient = ambient.contains(r);
    if (in_sum) res.sumset.push_back(r);
    if (in_sum && !in_ambient && !extra) extra = r;
    if (!in_sum && in_ambient && !missing) missing = r;
  }
  res.equal = !extra && !missing;
  if (extra) {
    res.witness = extra;
    res.witness_in_sumset = true;
  } else if (missing) {
    res.witness = missing;
    res.witness_in_sumset = false;
  }
  return res;
}

namespace {

struct HalfVector {
  std::vector<std::int64_t> coords;
  std::int64_t sum;
};

void collect_halves(const std::vector<std::int64_t>& primes_list, int d, int k, std::int64_t limit, int depth,
                    std::vector<std::int64_t>& cur, std::int64_t sum, std::vector<HalfVector>& out) {
  if (depth == d) {
    out.push_back({cur, sum});
    return;
  }
  for (std::int64_t p : primes_list) {
    const std::int64_t s = sum + ipow(p, static_cast<unsigned>(k));
    if (s > limit) break;
    cur[static_cast<std::size_t>(depth)] = p;
    collect_halves(primes_list, d, k, limit, depth + 1, cur, s, out);
  }
}

// Split the 2d coordinates into two d-subsets with even power sums.
bool find_even_split(const std::vector<std::int64_t>& all, int d, int k, std::vector<std::int64_t>& first,
                     std::vector<std::int64_t>& second) {
  const int n = static_cast<int>(all.size());
  std::vector<char> pick(static_cast<std::size_t>(n), 0);
  std::fill(pick.begin(), pick.begin() + d, 1);
  std::sort(pick.begin(), pick.end(), std::greater<>());
  do {
    std::int64_t s1 = 0, s2 = 0;
    first.clear();
    second.clear();
    for (int i = 0; i < n; ++i) {
      const std::int64_t v = ipow(all[static_cast<std::size_t>(i)], static_cast<unsigned>(k));
      if (pick[static_cast<std::size_t>(i)]) {
        s1 += v;
        first.push_back(all[static_cast<std::size_t>(i)]);
      } else {
        s2 += v;
        second.push_back(all[static_cast<std::size_t>(i)]);
      }
    }
    if (s1 % 2 == 0 && s2 % 2 == 0) return true;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return false;
}

}  // namespace

ParityRearrangementReport parity_rearrangement_check(int d, int k, std::int64_t lambda, std::int64_t coordinate_bound) {
  if (d < 1 || d % 2 != 0) throw std::invalid_argument("parity rearrangement requires even d");
  if (k < 1 || k % 2 == 0) throw std::invalid_argument("parity rearrangement requires odd k");
  if (lambda % 2 != 0) throw std::invalid_argument("parity rearrangement requires even lambda");

  ParityRearrangementReport report;
  const auto primes_list = sieve(coordinate_bound);
  std::vector<HalfVector> halves;
  std::vector<std::int64_t> cur(static_cast<std::size_t>(d));
  collect_halves(primes_list, d, k, lambda, 0, cur, 0, halves);

  std::multimap<std::int64_t, const HalfVector*> by_sum;
  for (const auto& h : halves) by_sum.emplace(h.sum, &h);

  bool failed = false;
  for (const auto& p : halves) {
    auto [lo, hi] = by_sum.equal_range(lambda - p.sum);
    for (auto it = lo; it != hi; ++it) {
      const HalfVector& q = *it->second;
      ++report.solutions;
      const bool all_odd = std::all_of(p.coords.begin(), p.coords.end(), [](auto v) { return v % 2 == 1; }) &&
                           std::all_of(q.coords.begin(), q.coords.end(), [](auto v) { return v % 2 == 1; });
      if (all_odd) ++report.solutions_all_odd;
      if (p.sum % 2 == 0) {
        ++report.halves_already_even;
        continue;
      }
      ++report.halves_odd;
      std::vector<std::int64_t> all = p.coords;
      all.insert(all.end(), q.coords.begin(), q.coords.end());
      std::vector<std::int64_t> first, second;
      const bool ok = find_even_split(all, d, k, first, second);
      // The rearrangement must itself be a prime solution at the same lambda.
      const bool verified = ok && power_norm(std::span<const std::int64_t>(first), static_cast<unsigned>(k)) +
                                              power_norm(std::span<const std::int64_t>(second), static_cast<unsigned>(k)) ==
                                          lambda;
      if (verified) {
        ++report.rearranged;
        if (!report.example_before) {
          report.example_before = {LatticePoint(p.coords), LatticePoint(q.coords)};
          report.example_after = {LatticePoint(first), LatticePoint(second)};
        }
      } else if (!failed) {
        failed = true;
        report.example_before = {LatticePoint(p.coords), LatticePoint(q.coords)};
        report.example_after.reset();
      }
    }
  }
  if (report.solutions == 0)
    report.status = ParityRearrangementReport::Status::vacuous;
  else
    report.status = failed ? ParityRearrangementReport::Status::failure : ParityRearrangementReport::Status::verified;
  return report;
}

std::string ParityRearrangementReport::summary() const {
  std::ostringstream os;
  const char* s = status == Status::verified ? "verified" : status == Status::failure ? "failure" : "vacuous";
  os << s << " solutions=" << solutions << " all_odd_prime=" << solutions_all_odd
     << " already_even=" << halves_already_even << " odd_halves=" << halves_odd << " rearranged=" << rearranged;
  if (example_before) os << " example=" << example_before->first.str() << "+" << example_before->second.str();
  if (example_after) os << "->" << example_after->first.str() << "+" << example_after->second.str();
  return os.str();
}

}  // namespace dmslice::primes
