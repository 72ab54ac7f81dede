#include "dmslice/operators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "dmslice/parallel.hpp"
#include "dmslice/primes.hpp"

namespace dmslice {

NormalizationMode NormalizationMode::power_law(const Rational& phi) {
  if (phi < 0) throw std::invalid_argument("phi: power-law exponent must be non-negative");
  return {Kind::power_law, phi};
}

std::string NormalizationMode::str() const {
  return kind == Kind::exact_count ? "exact_count" : "power_law(phi=" + to_string(phi) + ")";
}

MaximalConfig MaximalConfig::range(std::int64_t lo, std::int64_t hi, NormalizationMode norm) {
  if (lo > hi) throw std::invalid_argument("lambdas: empty range");
  MaximalConfig c;
  for (std::int64_t l = lo; l <= hi; ++l) c.lambdas.push_back(l);
  c.normalization = std::move(norm);
  return c;
}

void MaximalConfig::validate() const {
  if (lambdas.empty()) throw std::invalid_argument("lambdas: empty lambda set");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] < 0) throw std::invalid_argument("lambdas: negative lambda");
    if (i && lambdas[i] <= lambdas[i - 1]) throw std::invalid_argument("lambdas: must be strictly increasing");
  }
  if (lambdas.front() == 0 && normalization.kind == NormalizationMode::Kind::power_law && !allow_zero &&
      normalization.phi != 0)
    throw std::invalid_argument("lambdas: lambda = 0 needs allow_zero under a power law");
}

namespace {

bool is_small_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

void check_inputs(const SurfaceSpec& spec, const std::vector<GridFunction>& fs) {
  spec.validate();
  if (spec.family == Family::general_additive)
    throw std::invalid_argument("family: general_additive surfaces have no registered operator");
  if (static_cast<int>(fs.size()) != spec.ell) throw std::invalid_argument("need exactly ell input functions");
  for (const auto& f : fs)
    if (static_cast<int>(f.dim()) != spec.d) throw std::invalid_argument("input dimension does not match d");
}

// h(u) with an early exit once it exceeds `cap`; returns cap + 1 then.
std::int64_t capped_norm(std::span<const std::int64_t> u, int k, std::int64_t cap) {
  std::int64_t s = 0;
  for (std::int64_t c : u) {
    const std::int64_t a = c < 0 ? -c : c;
    std::int64_t p = 1;
    for (int i = 0; i < k; ++i) {
      if (a != 0 && p > (cap + 1) / a) return cap + 1;
      p *= a;
    }
    s += p;
    if (s > cap) return cap + 1;
  }
  return s;
}

// 1 / normalization at lambda, exact when possible.
struct Divisor {
  bool zero = false;  // empty surface: average is 0
  std::optional<PowerProduct> inverse;
  Real inverse_approx = 0;
};

Divisor power_divisor(std::int64_t lambda, const Rational& phi) {
  Divisor dv;
  if (lambda == 0 || phi == 0) {
    dv.inverse = PowerProduct(Rational(1));
  } else {
    dv.inverse = PowerProduct::power(Rational(static_cast<long>(lambda)), -phi);
  }
  dv.inverse_approx = dv.inverse->approx();
  return dv;
}

Divisor count_divisor(const Value& size) {
  Divisor dv;
  if (size.is_zero()) {
    dv.zero = true;
    return dv;
  }
  if (size.is_exact()) {
    dv.inverse = PowerProduct(Rational(1)) / size.exact();
    dv.inverse_approx = dv.inverse->approx();
  } else {
    dv.inverse_approx = 1 / size.approx();
  }
  return dv;
}

bool real_weights(const SurfaceSpec& spec) {
  return spec.is_prime() && spec.weighting == PrimeWeighting::logarithmic;
}

std::int64_t lcm_of_denominators(const GridFunction& f) {
  std::int64_t m = 1;
  for (const auto& [x, v] : f.values()) m = lcm64(m, to_int64(v.get_den()));
  return m;
}

// Histogram-based evaluator shared by maximal_function and linear_maximal.
class Engine {
 public:
  Engine(const SurfaceSpec& spec, const std::vector<GridFunction>& fs, const std::vector<std::int64_t>& lambdas,
         const NormalizationMode& norm)
      : spec_(spec), lambdas_(lambdas), L_(lambdas.back()), real_(real_weights(spec)) {
    total_scale_ = 1;
    for (const auto& f : fs) {
      const std::int64_t D = lcm_of_denominators(f);
      total_scale_ *= static_cast<long>(D);
      std::vector<Support> slot;
      for (const auto& [x, v] : f.values()) {
        Rational scaled = v * static_cast<long>(D);
        slot.push_back({x, to_int64(scaled.get_num()), to_real(v)});
      }
      supports_.push_back(std::move(slot));
    }
    if (spec_.is_prime()) lookup_.emplace(iroot(std::max<std::int64_t>(L_, 1), static_cast<unsigned>(spec_.k)) + 1);
    if (spec_.family == Family::annulus) {
      for (std::int64_t l : lambdas_) slack_.push_back(lattice::annulus_slack(l, *spec_.theta, spec_.width_multiplier));
    }
    std::optional<SurfaceCounter> counter;
    if (norm.kind == NormalizationMode::Kind::exact_count) counter.emplace(spec_, L_);
    for (std::int64_t l : lambdas_) {
      if (spec_.is_prime() && !spec_.ambient_progression().contains(l)) {
        Divisor dv;
        dv.zero = true;
        divisors_.push_back(dv);
      } else if (counter) {
        divisors_.push_back(count_divisor(counter->size(l)));
      } else {
        divisors_.push_back(power_divisor(l, norm.phi));
      }
    }
  }

  Value at(const LatticePoint& x, bool shifted) const {
    std::vector<std::int64_t> dense_i;
    std::vector<Real> dense_r;
    accumulate(x, dense_i, dense_r);
    const std::size_t n = lambdas_.size();
    // raw[j]: the unnormalized sum at lambda_j; for the shifted annulus the
    // best window over upper cutoffs b <= lambda_j.
    std::vector<std::int64_t> raw_i(n, 0);
    std::vector<Real> raw_r(n, 0);
    const auto Lz = static_cast<std::size_t>(L_);
    std::vector<std::int64_t> pre_i;
    std::vector<Real> pre_r;
    if (real_) {
      pre_r.assign(Lz + 1, 0);
      Real run = 0;
      for (std::size_t m = 0; m <= Lz; ++m) pre_r[m] = run += dense_r[m];
    } else {
      pre_i.assign(Lz + 1, 0);
      std::int64_t run = 0;
      for (std::size_t m = 0; m <= Lz; ++m) pre_i[m] = run = checked_add(run, dense_i[m]);
    }
    auto window_i = [&](std::int64_t lo, std::int64_t hi) -> std::int64_t {
      if (hi < 0) return 0;
      return pre_i[static_cast<std::size_t>(hi)] - (lo > 0 ? pre_i[static_cast<std::size_t>(lo - 1)] : 0);
    };
    auto window_r = [&](std::int64_t lo, std::int64_t hi) -> Real {
      if (hi < 0) return 0;
      return pre_r[static_cast<std::size_t>(hi)] - (lo > 0 ? pre_r[static_cast<std::size_t>(lo - 1)] : 0);
    };
    std::vector<std::int64_t> nonzero;
    if (shifted)
      for (std::size_t m = 0; m <= Lz; ++m)
        if (dense_i[m] != 0) nonzero.push_back(static_cast<std::int64_t>(m));
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t l = lambdas_[j];
      if (shifted) {
        std::int64_t best = 0;
        for (std::int64_t b : nonzero) {
          if (b > l) break;
          best = std::max(best, window_i(b - slack_[j], b));
        }
        raw_i[j] = best;
        continue;
      }
      std::int64_t lo = l, hi = l;
      if (spec_.is_ball_like()) lo = 0;
      if (spec_.family == Family::annulus) lo = l - slack_[j];
      lo = std::max<std::int64_t>(lo, 0);
      if (real_)
        raw_r[j] = lo == hi ? dense_r[static_cast<std::size_t>(hi)] : window_r(lo, hi);
      else
        raw_i[j] = window_i(lo, hi);
    }

    std::vector<Real> approx(n, 0);
    Real best = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (divisors_[j].zero) continue;
      const Real raw = real_ ? raw_r[j] : static_cast<Real>(raw_i[j]);
      approx[j] = raw * divisors_[j].inverse_approx;
      best = std::max(best, approx[j]);
    }
    if (best <= 0) return Value();
    const bool exact = !real_ && std::all_of(divisors_.begin(), divisors_.end(),
                                             [](const Divisor& d) { return d.zero || d.inverse.has_value(); });
    if (!exact) return Value::approximate(best);
    // Exact comparison among near-maximal candidates only.
    std::optional<Value> winner;
    for (std::size_t j = 0; j < n; ++j) {
      if (divisors_[j].zero || approx[j] < best * (1 - 1e-12L)) continue;
      Rational q(BigInt(static_cast<long>(raw_i[j])), total_scale_);
      q.canonicalize();
      Value v(PowerProduct(q) * *divisors_[j].inverse);
      if (!winner || compare(v, *winner) > 0) winner = std::move(v);
    }
    return *winner;
  }

 private:
  struct Support {
    LatticePoint point;
    std::int64_t scaled;
    Real value;
  };

  // Convolution over slots of the histograms mu -> sum of f_i(a) over h(x - a) = mu.
  void accumulate(const LatticePoint& x, std::vector<std::int64_t>& dense_i, std::vector<Real>& dense_r) const {
    const auto Lz = static_cast<std::size_t>(L_);
    std::vector<std::pair<std::int64_t, std::int64_t>> cur_i{{0, 1}};
    std::vector<std::pair<std::int64_t, Real>> cur_r{{0, 1}};
    for (std::size_t slot = 0; slot < supports_.size(); ++slot) {
      std::vector<std::pair<std::int64_t, std::int64_t>> hist_i;
      std::vector<std::pair<std::int64_t, Real>> hist_r;
      const Progression& gamma = spec_.slot_progression(static_cast<int>(slot));
      for (const auto& s : supports_[slot]) {
        const LatticePoint u = x - s.point;
        Real weight = 1;
        if (spec_.is_prime()) {
          bool ok = true;
          for (std::int64_t c : u.coords())
            if (c < 2 || c > lookup_->limit() || !lookup_->is_prime(c)) ok = false;
          if (!ok) continue;
          if (real_)
            for (std::int64_t c : u.coords()) weight *= std::log(static_cast<Real>(c));
        }
        const std::int64_t mu = capped_norm(u.coords(), spec_.k, L_);
        if (mu > L_) continue;
        if (spec_.is_prime() && !gamma.contains(mu)) continue;
        if (real_)
          hist_r.emplace_back(mu, s.value * weight);
        else
          hist_i.emplace_back(mu, s.scaled);
      }
      if (real_) {
        std::vector<Real> next(Lz + 1, 0);
        for (auto [m1, v1] : cur_r)
          for (auto [m2, v2] : hist_r)
            if (m1 + m2 <= L_) next[static_cast<std::size_t>(m1 + m2)] += v1 * v2;
        cur_r.clear();
        for (std::size_t m = 0; m <= Lz; ++m)
          if (next[m] != 0) cur_r.emplace_back(static_cast<std::int64_t>(m), next[m]);
      } else {
        std::vector<std::int64_t> next(Lz + 1, 0);
        for (auto [m1, v1] : cur_i)
          for (auto [m2, v2] : hist_i)
            if (m1 + m2 <= L_) {
              auto& cell = next[static_cast<std::size_t>(m1 + m2)];
              cell = checked_add(cell, checked_mul(v1, v2));
            }
        cur_i.clear();
        for (std::size_t m = 0; m <= Lz; ++m)
          if (next[m] != 0) cur_i.emplace_back(static_cast<std::int64_t>(m), next[m]);
      }
    }
    if (real_) {
      dense_r.assign(Lz + 1, 0);
      for (auto [m, v] : cur_r) dense_r[static_cast<std::size_t>(m)] = v;
    } else {
      dense_i.assign(Lz + 1, 0);
      for (auto [m, v] : cur_i) dense_i[static_cast<std::size_t>(m)] = v;
    }
  }

  const SurfaceSpec& spec_;
  const std::vector<std::int64_t>& lambdas_;
  std::int64_t L_;
  bool real_;
  BigInt total_scale_;
  std::vector<std::vector<Support>> supports_;
  std::optional<primes::PrimeLookup> lookup_;
  std::vector<std::int64_t> slack_;
  std::vector<Divisor> divisors_;
};

ValueField evaluate_on_box(const Engine& engine, const Box& box, bool shifted) {
  ValueField out{box, std::vector<Value>(box.size())};
  parallel::for_each_index(box.size(), [&](std::size_t i) { out.values[i] = engine.at(box.point(i), shifted); });
  return out;
}

}  // namespace

Value multilinear_average(const SurfaceSpec& spec, const std::vector<GridFunction>& fs, std::int64_t lambda,
                          const NormalizationMode& norm, const LatticePoint& x) {
  check_inputs(spec, fs);
  if (static_cast<int>(x.dim()) != spec.d) throw std::invalid_argument("evaluation point dimension does not match d");
  if (lambda < 0) throw std::invalid_argument("lambda must be >= 0");
  if (spec.family == Family::annulus && lambda < 1) throw std::invalid_argument("annulus requires lambda >= 1");
  if (spec.is_prime() && !spec.ambient_progression().contains(lambda)) return Value();
  const bool real = real_weights(spec);

  // Enumerate one support point per slot; u_i = x - a_i.
  Rational sum_q = 0;
  Real sum_r = 0;
  const int ell = spec.ell;
  std::vector<const std::pair<const LatticePoint, Rational>*> pick(static_cast<std::size_t>(ell));
  std::function<void(int, std::int64_t, Real)> rec = [&](int slot, std::int64_t acc, Real weight) {
    if (slot == ell) {
      bool hit = false;
      switch (spec.family) {
        case Family::ball:
        case Family::prime_ball: hit = acc <= lambda; break;
        case Family::sphere:
        case Family::prime_sphere: hit = acc == lambda; break;
        case Family::annulus: hit = lattice::in_annulus(acc, lambda, *spec.theta, spec.width_multiplier); break;
        case Family::general_additive: break;
      }
      if (!hit) return;
      Rational prod = 1;
      for (const auto* p : pick) prod *= p->second;
      if (real)
        sum_r += to_real(prod) * weight;
      else
        sum_q += prod;
      return;
    }
    for (const auto& entry : fs[static_cast<std::size_t>(slot)].values()) {
      const LatticePoint u = x - entry.first;
      Real w = weight;
      if (spec.is_prime()) {
        bool ok = true;
        for (std::int64_t c : u.coords()) ok = ok && c > 0 && is_small_prime(c);
        if (!ok) continue;
        if (real)
          for (std::int64_t c : u.coords()) w *= std::log(static_cast<Real>(c));
      }
      const std::int64_t mu = power_norm(u, static_cast<unsigned>(spec.k));
      if (spec.is_prime() && !spec.slot_progression(slot).contains(mu)) continue;
      if (acc + mu > lambda) continue;
      pick[static_cast<std::size_t>(slot)] = &entry;
      rec(slot + 1, acc + mu, w);
    }
  };
  rec(0, 0, 1);

  if (norm.kind == NormalizationMode::Kind::exact_count) {
    SurfaceCounter counter(spec, lambda);
    const Value size = counter.size(lambda);
    if (size.is_zero()) return Value();
    if (real) return Value::approximate(sum_r / size.approx());
    return Value(PowerProduct(sum_q)) / size;
  }
  if (lambda == 0 && norm.phi != 0) throw std::invalid_argument("lambda = 0 under a power law with phi > 0");
  const Divisor dv = power_divisor(lambda, norm.phi);
  if (real) return Value::approximate(sum_r * dv.inverse_approx);
  return Value(PowerProduct(sum_q) * *dv.inverse);
}

Box default_box(const SurfaceSpec& spec, const std::vector<GridFunction>& fs, std::int64_t max_lambda) {
  const std::int64_t radius = iroot_ceil(std::max<std::int64_t>(max_lambda, 0), static_cast<unsigned>(spec.k));
  return hull_box(fs, radius);
}

ValueField maximal_function(const SurfaceSpec& spec, const std::vector<GridFunction>& fs, const MaximalConfig& config,
                            const std::optional<Box>& box) {
  check_inputs(spec, fs);
  config.validate();
  if (spec.family == Family::annulus && config.lambdas.front() < 1)
    throw std::invalid_argument("lambdas: annulus requires lambda >= 1");
  const Box b = box ? *box : default_box(spec, fs, config.max_lambda());
  if (static_cast<int>(b.dim()) != spec.d) throw std::invalid_argument("box dimension does not match d");
  Engine engine(spec, fs, config.lambdas, config.normalization);
  return evaluate_on_box(engine, b, false);
}

Rational LinearKind::phi(int d) const {
  const Rational dk = make_rational(d, k);
  switch (type) {
    case Type::hl_ball:
    case Type::prime_hl: return dk;
    case Type::sphere:
    case Type::prime_sphere: return dk - 1;
    case Type::annulus:
    case Type::shifted_annulus: return make_rational(d, 2) - 1 + theta;
  }
  return dk;
}

std::string LinearKind::str() const {
  std::ostringstream os;
  switch (type) {
    case Type::hl_ball: os << "M_HL(k=" << k << ")"; break;
    case Type::sphere: os << "A*(k=" << k << ")"; break;
    case Type::annulus: os << "S*(theta=" << to_string(theta) << ")"; break;
    case Type::shifted_annulus: os << "S*shift(theta=" << to_string(theta) << ")"; break;
    case Type::prime_hl: os << "M_HL^primes(k=" << k; break;
    case Type::prime_sphere: os << "A*^primes(k=" << k; break;
  }
  if (type == Type::prime_hl || type == Type::prime_sphere)
    os << (progression ? ",slot=" + progression->str() : std::string()) << ")";
  return os.str();
}

ValueField linear_maximal(const LinearKind& kind, const GridFunction& f, const std::vector<std::int64_t>& lambdas,
                          const Box& box, bool allow_zero) {
  const int d = static_cast<int>(f.dim());
  SurfaceSpec spec;
  switch (kind.type) {
    case LinearKind::Type::hl_ball: spec = SurfaceSpec::ball(d, kind.k, 1); break;
    case LinearKind::Type::sphere: spec = SurfaceSpec::sphere(d, kind.k, 1); break;
    case LinearKind::Type::annulus:
    case LinearKind::Type::shifted_annulus:
      spec = SurfaceSpec::annulus(d, kind.theta, 1);
      spec.width_multiplier = kind.width_multiplier;
      break;
    case LinearKind::Type::prime_hl:
    case LinearKind::Type::prime_sphere: {
      const Progression slot = kind.progression.value_or(Progression::all());
      ProgressionConstraints pc{{slot}, kind.type == LinearKind::Type::prime_sphere ? slot : Progression::all()};
      spec = kind.type == LinearKind::Type::prime_hl ? SurfaceSpec::prime_ball(d, kind.k, 1, pc)
                                                     : SurfaceSpec::prime_sphere(d, kind.k, 1, pc);
      spec.weighting = kind.weighting;
      break;
    }
  }
  MaximalConfig config;
  config.lambdas = lambdas;
  // The normalization exponent may be negative for spheres with d < k.
  config.normalization = {NormalizationMode::Kind::power_law, kind.phi(d)};
  config.allow_zero = allow_zero;
  config.validate();
  if (spec.family == Family::annulus && lambdas.front() < 1)
    throw std::invalid_argument("lambdas: annulus requires lambda >= 1");
  if (static_cast<int>(box.dim()) != d) throw std::invalid_argument("box dimension does not match input");
  const std::vector<GridFunction> fs{f};
  spec.validate();
  Engine engine(spec, fs, config.lambdas, config.normalization);
  return evaluate_on_box(engine, box, kind.type == LinearKind::Type::shifted_annulus);
}

Value ratio_norm_probe(const SurfaceSpec& spec, const ProbeExponents& exps,
                       const std::vector<std::vector<GridFunction>>& trials, const MaximalConfig& config,
                       const std::optional<Box>& box) {
  if (static_cast<int>(exps.p.size()) != spec.ell) throw std::invalid_argument("need one p_i per slot");
  Value best;
  for (const auto& fs : trials) {
    Value denom(PowerProduct(Rational(1)));
    for (std::size_t i = 0; i < fs.size(); ++i) denom = denom * lp_norm(fs[i], exps.p[i]);
    if (denom.is_zero()) continue;
    const ValueField t = maximal_function(spec, fs, config, box);
    Value ratio = lp_norm(t, exps.r) / denom;
    if (compare(ratio, best) > 0) best = std::move(ratio);
  }
  return best;
}

}  // namespace dmslice
