#include "dmslice/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dmslice/parallel.hpp"

namespace dmslice {

LatticePoint LatticePoint::operator+(const LatticePoint& o) const {
  if (o.dim() != dim()) throw std::invalid_argument("dimension mismatch in LatticePoint addition");
  LatticePoint r(*this);
  for (std::size_t i = 0; i < dim(); ++i) r.coords_[i] = checked_add(coords_[i], o.coords_[i]);
  return r;
}

LatticePoint LatticePoint::operator-(const LatticePoint& o) const {
  if (o.dim() != dim()) throw std::invalid_argument("dimension mismatch in LatticePoint subtraction");
  LatticePoint r(*this);
  for (std::size_t i = 0; i < dim(); ++i) r.coords_[i] = checked_add(coords_[i], -o.coords_[i]);
  return r;
}

std::string LatticePoint::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? "," : "") << coords_[i];
  os << ')';
  return os.str();
}

std::int64_t power_norm(std::span<const std::int64_t> u, unsigned k) {
  std::int64_t s = 0;
  for (std::int64_t c : u) s = checked_add(s, ipow(c < 0 ? -c : c, k));
  return s;
}

namespace lattice {

namespace {

void check_args(int d, int k, std::int64_t lambda) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (k < 1) throw std::invalid_argument("degree must be >= 1");
  if (lambda < 0) throw std::invalid_argument("lambda must be >= 0");
}

// Recursive coordinate descent: coordinate `depth` ranges over
// |u| <= floor(remaining^(1/k)).
struct SphereWalker {
  int d;
  unsigned k;
  bool ball;  // accept any remaining >= 0 at the leaf instead of exactly 0
  std::vector<std::int64_t> powers;  // powers[j] = j^k
  std::vector<std::int64_t> current;
  std::vector<LatticePoint>* out;

  void walk(int depth, std::int64_t remaining) {
    if (depth == d) {
      if (ball || remaining == 0) out->emplace_back(current);
      return;
    }
    if (!ball && depth == d - 1) {
      std::int64_t r = iroot(remaining, k);
      if (powers[static_cast<std::size_t>(r)] != remaining) return;
      if (r == 0) {
        current[depth] = 0;
        out->emplace_back(current);
      } else {
        current[depth] = -r;
        out->emplace_back(current);
        current[depth] = r;
        out->emplace_back(current);
      }
      return;
    }
    const std::int64_t bound = iroot(remaining, k);
    for (std::int64_t u = -bound; u <= bound; ++u) {
      current[depth] = u;
      walk(depth + 1, remaining - powers[static_cast<std::size_t>(u < 0 ? -u : u)]);
    }
  }
};

std::vector<LatticePoint> enumerate(int d, int k, std::int64_t lambda, bool ball) {
  check_args(d, k, lambda);
  const std::int64_t bound = iroot(lambda, static_cast<unsigned>(k));
  std::vector<std::int64_t> powers(static_cast<std::size_t>(bound) + 1);
  for (std::int64_t j = 0; j <= bound; ++j) powers[static_cast<std::size_t>(j)] = ipow(j, static_cast<unsigned>(k));

  // Partition the outermost coordinate across workers; concatenation in
  // coordinate order keeps the result independent of the worker count.
  const std::size_t width = static_cast<std::size_t>(2 * bound + 1);
  std::vector<std::vector<LatticePoint>> parts(width);
  parallel::for_each_index(width, [&](std::size_t i) {
    const std::int64_t u0 = static_cast<std::int64_t>(i) - bound;
    const std::int64_t rest = lambda - powers[static_cast<std::size_t>(u0 < 0 ? -u0 : u0)];
    SphereWalker w{d, static_cast<unsigned>(k), ball, powers, std::vector<std::int64_t>(static_cast<std::size_t>(d)),
                   &parts[i]};
    w.current[0] = u0;
    if (d == 1) {
      if (ball || rest == 0) parts[i].emplace_back(w.current);
      return;
    }
    w.walk(1, rest);
  });
  std::vector<LatticePoint> out;
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::vector<LatticePoint> enumerate_sphere(int d, int k, std::int64_t lambda) { return enumerate(d, k, lambda, false); }

std::vector<LatticePoint> enumerate_ball(int d, int k, std::int64_t lambda) { return enumerate(d, k, lambda, true); }

std::vector<BigInt> sphere_count_table(int d, int k, std::int64_t max_lambda) {
  check_args(d, k, max_lambda);
  const auto L = static_cast<std::size_t>(max_lambda);
  // One-dimensional representation counts: r1[0] = 1, r1[j^k] = 2.
  std::vector<std::pair<std::size_t, unsigned>> r1{{0, 1}};
  for (std::int64_t j = 1;; ++j) {
    std::int64_t p = ipow(j, static_cast<unsigned>(k));
    if (p > max_lambda) break;
    r1.emplace_back(static_cast<std::size_t>(p), 2u);
  }
  std::vector<BigInt> table(L + 1, 0);
  for (auto [mu, c] : r1) table[mu] = c;
  for (int dim = 2; dim <= d; ++dim) {
    std::vector<BigInt> next(L + 1, 0);
    for (std::size_t mu = 0; mu <= L; ++mu) {
      if (table[mu] == 0) continue;
      for (auto [step, c] : r1) {
        if (mu + step > L) break;
        next[mu + step] += table[mu] * c;
      }
    }
    table.swap(next);
  }
  return table;
}

BigInt count_sphere(int d, int k, std::int64_t lambda) {
  return sphere_count_table(d, k, lambda)[static_cast<std::size_t>(lambda)];
}

BigInt count_ball(int d, int k, std::int64_t lambda) {
  BigInt total = 0;
  for (const auto& c : sphere_count_table(d, k, lambda)) total += c;
  return total;
}

namespace {

// t < w * lambda^theta  for integer t > 0, theta = p/q:  (t/w)^q < lambda^p.
bool below_width(std::int64_t t, std::int64_t lambda, const Rational& theta, const Rational& w) {
  if (t <= 0) return true;
  const long p = theta.get_num().get_si();
  const long q = theta.get_den().get_si();
  Rational lhs = rational_pow(Rational(static_cast<long>(t)) / w, q);
  Rational rhs = rational_pow(Rational(static_cast<long>(lambda)), p);
  return lhs < rhs;
}

}  // namespace

std::int64_t annulus_slack(std::int64_t lambda, const Rational& theta, const Rational& multiplier) {
  if (lambda < 1) throw std::invalid_argument("annulus requires lambda >= 1");
  if (theta <= 0 || theta >= 1) throw std::invalid_argument("annulus requires 0 < theta < 1");
  if (multiplier <= 0) throw std::invalid_argument("annulus width multiplier must be positive");
  Real width = to_real(multiplier) * std::pow(static_cast<Real>(lambda), to_real(theta));
  auto t = static_cast<std::int64_t>(std::ceil(width)) - 1;
  if (t < 0) t = 0;
  while (t > 0 && !below_width(t, lambda, theta, multiplier)) --t;
  while (below_width(t + 1, lambda, theta, multiplier)) ++t;
  return t;
}

bool in_annulus(std::int64_t norm2, std::int64_t lambda, const Rational& theta, const Rational& multiplier) {
  if (norm2 > lambda) return false;
  return below_width(lambda - norm2, lambda, theta, multiplier);
}

std::vector<LatticePoint> enumerate_annulus(int d, const Rational& theta, std::int64_t lambda,
                                            const Rational& width_multiplier) {
  check_args(d, 2, lambda);
  const std::int64_t slack = annulus_slack(lambda, theta, width_multiplier);
  std::vector<LatticePoint> out;
  for (std::int64_t mu = std::max<std::int64_t>(0, lambda - slack); mu <= lambda; ++mu) {
    auto shell = enumerate_sphere(d, 2, mu);
    std::move(shell.begin(), shell.end(), std::back_inserter(out));
  }
  std::sort(out.begin(), out.end());
  return out;
}

BigInt count_annulus(int d, const Rational& theta, std::int64_t lambda, const Rational& width_multiplier) {
  const std::int64_t slack = annulus_slack(lambda, theta, width_multiplier);
  auto table = sphere_count_table(d, 2, lambda);
  BigInt total = 0;
  for (std::int64_t mu = std::max<std::int64_t>(0, lambda - slack); mu <= lambda; ++mu)
    total += table[static_cast<std::size_t>(mu)];
  return total;
}

}  // namespace lattice
}  // namespace dmslice
