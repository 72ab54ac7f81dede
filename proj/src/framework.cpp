#include "dmslice/framework.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dmslice/lattice.hpp"
#include "dmslice/primes.hpp"

namespace dmslice {

namespace {

PhiFn family_phi(Family family, int k, const std::optional<Rational>& theta) {
  switch (family) {
    case Family::ball:
    case Family::prime_ball: return [k](int n) -> Rational { return make_rational(n, k); };
    case Family::annulus: {
      const Rational t = *theta;
      return [t](int n) -> Rational { return make_rational(n, 2) - 1 + t; };
    }
    default: return [k](int n) -> Rational { return make_rational(n, k) - 1; };
  }
}

ComponentFn norm_component(int k) {
  return [k](std::span<const std::int64_t> u) { return power_norm(u, static_cast<unsigned>(k)); };
}

// Every point of [-r, r]^d, or of {primes <= r}^d.
template <class Fn>
void for_each_point(int d, std::int64_t r, bool primes_only, Fn&& fn) {
  std::vector<std::int64_t> values;
  if (primes_only) {
    values = primes::sieve(r);
  } else {
    for (std::int64_t c = -r; c <= r; ++c) values.push_back(c);
  }
  if (values.empty()) return;
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<std::int64_t> point(static_cast<std::size_t>(d), values[0]);
  while (true) {
    fn(std::span<const std::int64_t>(point));
    int i = d - 1;
    while (i >= 0) {
      auto& j = idx[static_cast<std::size_t>(i)];
      if (++j < values.size()) {
        point[static_cast<std::size_t>(i)] = values[j];
        break;
      }
      j = 0;
      point[static_cast<std::size_t>(i)] = values[0];
      --i;
    }
    if (i < 0) return;
  }
}

std::string point_str(std::span<const std::int64_t> u) { return LatticePoint(std::vector<std::int64_t>(u.begin(), u.end())).str(); }

std::int64_t additivity_radius(int d, bool primes_only) {
  if (primes_only) {
    std::int64_t r = 3;
    while (std::pow(static_cast<double>(primes::sieve(r + 1).size()), d) <= 400) ++r;
    return r;
  }
  std::int64_t r = 1;
  while (std::pow(static_cast<double>(2 * (r + 1) + 1), d) <= 400) ++r;
  return r;
}

std::vector<std::vector<std::int64_t>> collect(int d, std::int64_t r, bool primes_only) {
  std::vector<std::vector<std::int64_t>> out;
  for_each_point(d, r, primes_only, [&](std::span<const std::int64_t> u) { out.emplace_back(u.begin(), u.end()); });
  return out;
}

}  // namespace

FrameworkSurface framework_surface(const SurfaceSpec& spec, std::int64_t onset) {
  spec.validate();
  FrameworkSurface s;
  s.name = spec.describe();
  s.k = spec.k;
  s.onset = onset;
  if (spec.family == Family::general_additive) {
    if (spec.components.size() != 2) throw std::invalid_argument("components: the checker takes bilinear surfaces");
    for (int i = 0; i < 2; ++i) {
      const auto& c = spec.components[static_cast<std::size_t>(i)];
      s.dims[static_cast<std::size_t>(i)] = c.d;
      s.prime_slots[static_cast<std::size_t>(i)] = c.family == Family::prime_sphere;
      s.components.push_back(norm_component(c.k));
    }
    auto c1 = s.components[0], c2 = s.components[1];
    s.h = [c1, c2](std::span<const std::int64_t> u, std::span<const std::int64_t> v) { return c1(u) + c2(v); };
    s.phi = family_phi(Family::sphere, spec.k, std::nullopt);
    return s;
  }
  const int d2 = spec.ell > 2 ? (spec.ell - 1) * spec.d : spec.d;
  s.dims = {spec.d, d2};
  s.components = {norm_component(spec.k), norm_component(spec.k)};
  const int k = spec.k;
  s.h = [k](std::span<const std::int64_t> u, std::span<const std::int64_t> v) {
    return power_norm(u, static_cast<unsigned>(k)) + power_norm(v, static_cast<unsigned>(k));
  };
  s.phi = family_phi(spec.family, spec.k, spec.theta);
  switch (spec.family) {
    case Family::ball:
    case Family::prime_ball: s.shape = FrameworkSurface::Shape::ball; break;
    case Family::annulus:
      s.shape = FrameworkSurface::Shape::annulus;
      s.theta = spec.theta;
      break;
    default: s.shape = FrameworkSurface::Shape::level; break;
  }
  if (spec.is_prime()) {
    if (spec.ell > 2) throw std::invalid_argument("ell: the checker pairs prime slots only for l <= 2");
    s.prime_slots = {true, true};
    s.slot_sets = {spec.slot_progression(0), spec.slot_progression(spec.ell == 1 ? 0 : 1)};
    s.slot_min = {1, 1};
    s.ambient = spec.ambient_progression();
  }
  return s;
}

FrameworkSurface multiplicative_surface(int d) {
  FrameworkSurface s;
  s.name = "multiplicative |u|^2|v|^2 (d=" + std::to_string(d) + ")";
  s.k = 2;
  s.dims = {d, d};
  s.h = [](std::span<const std::int64_t> u, std::span<const std::int64_t> v) {
    return checked_mul(power_norm(u, 2), power_norm(v, 2));
  };
  s.phi = [](int n) -> Rational { return make_rational(n, 2) - 1; };
  return s;
}

std::vector<FrameworkSurface> framework_presets() {
  std::vector<FrameworkSurface> out;
  out.push_back(framework_surface(SurfaceSpec::ball(1, 2, 2)));
  out.push_back(framework_surface(SurfaceSpec::ball(2, 2, 2)));
  out.push_back(framework_surface(SurfaceSpec::sphere(2, 2, 2)));
  FrameworkSurface ann = framework_surface(SurfaceSpec::annulus(5, Rational(1, 2), 2));
  ann.suggested_lambda_max = 60;
  out.push_back(ann);
  // Slot values start at 3^2+3^2+3^2+5^2+5^2 = 77, so lambda >= 2*77.
  ProgressionConstraints pc{{Progression(5, 24), Progression(5, 24)}, Progression(10, 24)};
  FrameworkSurface pr = framework_surface(SurfaceSpec::prime_sphere(5, 2, 2, pc), 154);
  pr.suggested_lambda_max = 600;
  out.push_back(pr);
  return out;
}

FrameworkReport check_framework(const FrameworkSurface& s, const FrameworkProbe& probe) {
  FrameworkReport rep;
  rep.surface = s.name;
  rep.onset = s.onset;
  rep.lambda_max = probe.lambda_max;
  const std::int64_t L = probe.lambda_max;
  if (L < 1) throw std::invalid_argument("lambda_max: must be >= 1");

  // 1: phi(l d) - phi((l-1) d) = d/k.
  {
    auto& c = rep.conditions[0];
    c.pass = static_cast<bool>(s.phi);
    if (!s.phi) c.witness = "no exponent function";
    for (int n = 1; c.pass && n <= probe.max_dimension; ++n)
      for (int l = 2; c.pass && l <= 4; ++l) {
        const Rational got = s.phi(l * n) - s.phi((l - 1) * n);
        const Rational want = make_rational(n, s.k);
        if (got != want) {
          c.pass = false;
          c.witness = "d=" + std::to_string(n) + " l=" + std::to_string(l) + ": phi(ld)-phi((l-1)d)=" +
                      to_string(got) + " != " + to_string(want);
        }
      }
    if (c.pass) c.detail = "phi(ld)-phi((l-1)d)=d/" + std::to_string(s.k) + " for d<=" + std::to_string(probe.max_dimension) + ", l<=4";
  }

  // 2: h(u, v) = h_1(u) + h_2(v) with h_i >= 0.
  const bool additive_declared = s.components.size() == 2;
  {
    auto& c = rep.conditions[1];
    std::array<std::vector<std::vector<std::int64_t>>, 2> boxes;
    for (std::size_t i = 0; i < 2; ++i) {
      const std::int64_t r = probe.additivity_radius ? probe.additivity_radius
                                                     : additivity_radius(s.dims[i], s.prime_slots[i]);
      boxes[i] = collect(s.dims[i], r, s.prime_slots[i]);
    }
    if (!additive_declared) {
      c.pass = false;
      c.witness = "structural: no additive decomposition h = h1(u) + h2(v) declared";
      const std::vector<std::int64_t> zu(static_cast<std::size_t>(s.dims[0]), 0), zv(static_cast<std::size_t>(s.dims[1]), 0);
      const std::int64_t h00 = s.h(zu, zv);
      for (const auto& u : boxes[0]) {
        bool found = false;
        for (const auto& v : boxes[1]) {
          const std::int64_t m = s.h(u, v) - s.h(u, zv) - s.h(zu, v) + h00;
          if (m != 0) {
            c.detail = "mixed difference " + std::to_string(m) + " at u=" + point_str(u) + " v=" + point_str(v);
            found = true;
            break;
          }
        }
        if (found) break;
      }
    } else {
      c.pass = true;
      for (std::size_t i = 0; i < 2 && c.pass; ++i)
        for (const auto& u : boxes[i])
          if (s.components[i](u) < 0) {
            c.pass = false;
            c.witness = "h" + std::to_string(i + 1) + "(" + point_str(u) + ") < 0";
            break;
          }
      for (const auto& u : boxes[0]) {
        if (!c.pass) break;
        const std::int64_t a = s.components[0](u);
        for (const auto& v : boxes[1])
          if (s.h(u, v) != a + s.components[1](v)) {
            c.pass = false;
            c.witness = "h != h1 + h2 at u=" + point_str(u) + " v=" + point_str(v);
            break;
          }
      }
      if (c.pass)
        c.detail = "additive and non-negative on " + std::to_string(boxes[0].size()) + "x" +
                   std::to_string(boxes[1].size()) + " probe points";
    }
  }

  // Value sets of the pieces up to L (slot classes applied).
  std::array<std::vector<char>, 2> values;
  std::vector<char> reach(static_cast<std::size_t>(L) + 1, 0);  // values of h on the surface
  if (additive_declared) {
    for (std::size_t i = 0; i < 2; ++i) {
      values[i].assign(static_cast<std::size_t>(L) + 1, 0);
      const std::int64_t r = iroot(L, static_cast<unsigned>(s.k));
      for_each_point(s.dims[i], r, s.prime_slots[i], [&](std::span<const std::int64_t> u) {
        const std::int64_t a = s.components[i](u);
        if (a < 0 || a > L || a < s.slot_min[i] || !s.slot_sets[i].contains(a)) return;
        values[i][static_cast<std::size_t>(a)] = 1;
      });
    }
    for (std::int64_t a = 0; a <= L; ++a) {
      if (!values[0][static_cast<std::size_t>(a)]) continue;
      for (std::int64_t b = 0; a + b <= L; ++b)
        if (values[1][static_cast<std::size_t>(b)]) reach[static_cast<std::size_t>(a + b)] = 1;
    }
  } else {
    const std::int64_t r = iroot(L, static_cast<unsigned>(s.k));
    const auto us = collect(s.dims[0], r, s.prime_slots[0]);
    const auto vs = collect(s.dims[1], r, s.prime_slots[1]);
    for (const auto& u : us)
      for (const auto& v : vs) {
        const std::int64_t m = s.h(u, v);
        if (m >= 0 && m <= L) reach[static_cast<std::size_t>(m)] = 1;
      }
  }

  // 3: every allowable lambda >= onset has a non-empty surface.
  {
    auto& c = rep.conditions[2];
    std::vector<std::int64_t> holes;
    std::int64_t smallest = -1;
    for (std::int64_t m = 0; m <= L; ++m)
      if (reach[static_cast<std::size_t>(m)]) {
        smallest = m;
        break;
      }
    for (std::int64_t l = 1; l <= L; ++l) {
      if (!s.ambient.contains(l)) continue;
      bool nonempty = false;
      switch (s.shape) {
        case FrameworkSurface::Shape::level: nonempty = reach[static_cast<std::size_t>(l)] != 0; break;
        case FrameworkSurface::Shape::ball: nonempty = smallest >= 0 && smallest <= l; break;
        case FrameworkSurface::Shape::annulus: {
          const std::int64_t t = lattice::annulus_slack(l, *s.theta, Rational(1));
          for (std::int64_t m = std::max<std::int64_t>(0, l - t); m <= l && !nonempty; ++m)
            nonempty = reach[static_cast<std::size_t>(m)] != 0;
          break;
        }
      }
      if (nonempty) continue;
      if (l < s.onset)
        rep.holes_below_onset.push_back(l);
      else
        holes.push_back(l);
    }
    c.pass = holes.empty();
    if (!c.pass) {
      c.witness = "lambda=" + std::to_string(holes.front());
      std::ostringstream os;
      os << holes.size() << " empty surfaces at or above onset " << s.onset << ":";
      for (std::size_t i = 0; i < std::min<std::size_t>(holes.size(), 10); ++i) os << ' ' << holes[i];
      c.detail = os.str();
    } else {
      c.detail = "no holes in [" + std::to_string(s.onset) + "," + std::to_string(L) + "] within " + s.ambient.str();
    }
  }

  // 4, 5: eta_i = lambda - h_other lands in the slot class, and every
  // allowable eta_i arises from an allowable lambda.
  for (std::size_t i = 0; i < 2; ++i) {
    auto& c = rep.conditions[3 + i];
    if (!additive_declared) {
      c.pass = false;
      c.witness = "needs an additive decomposition";
      continue;
    }
    const std::size_t o = 1 - i;
    c.pass = true;
    for (std::int64_t l = s.onset; l <= L && c.pass; ++l) {
      if (l < 1 || !s.ambient.contains(l)) continue;
      for (std::int64_t w = 0; w <= l; ++w) {
        if (!values[o][static_cast<std::size_t>(w)]) continue;
        const std::int64_t eta = l - w;
        if (eta < s.slot_min[i] || !s.slot_sets[i].contains(eta)) {
          c.pass = false;
          c.witness = "lambda=" + std::to_string(l) + " h" + std::to_string(o + 1) + "=" + std::to_string(w) +
                      " gives eta" + std::to_string(i + 1) + "=" + std::to_string(eta) + " outside " +
                      s.slot_sets[i].str();
          break;
        }
      }
    }
    for (std::int64_t eta = s.slot_min[i]; c.pass && eta <= L - s.onset; ++eta) {
      if (!s.slot_sets[i].contains(eta)) continue;
      bool hit = false;
      for (std::int64_t w = 0; eta + w <= L && !hit; ++w)
        hit = values[o][static_cast<std::size_t>(w)] && eta + w >= std::max<std::int64_t>(s.onset, 1) &&
              s.ambient.contains(eta + w);
      if (!hit) {
        c.pass = false;
        c.witness = "eta" + std::to_string(i + 1) + "=" + std::to_string(eta) + " arises from no allowable lambda";
      }
    }
    if (c.pass) c.detail = "eta" + std::to_string(i + 1) + " in " + s.slot_sets[i].str() + ", onto";
  }

  rep.overall = std::all_of(rep.conditions.begin(), rep.conditions.end(), [](const auto& c) { return c.pass; });
  return rep;
}

std::string FrameworkReport::str() const {
  std::ostringstream os;
  os << surface << ": " << (overall ? "pass" : "fail");
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    os << "\n  condition " << i + 1 << ": " << (conditions[i].pass ? "pass" : "fail");
    if (!conditions[i].witness.empty()) os << " witness " << conditions[i].witness;
    if (!conditions[i].detail.empty()) os << " (" << conditions[i].detail << ")";
  }
  if (!holes_below_onset.empty()) {
    os << "\n  holes below onset " << onset << ":";
    for (auto h : holes_below_onset) os << ' ' << h;
  }
  return os.str();
}

}  // namespace dmslice
