#include "dmslice/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "dmslice/exponents.hpp"
#include "dmslice/framework.hpp"
#include "dmslice/lattice.hpp"
#include "dmslice/operators.hpp"
#include "dmslice/primes.hpp"
#include "dmslice/sharpness.hpp"
#include "dmslice/slicing.hpp"
#include "dmslice/surface.hpp"

namespace dmslice {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::string real_str(Real r) {
  std::ostringstream os;
  os.precision(12);
  os << r;
  return os.str();
}

// Field named by an "xxx: message" exception, else `fallback`.
std::string field_of(const std::string& message, const std::string& fallback) {
  static const char* known[] = {"family", "d", "k", "ell", "theta", "width_multiplier", "progressions", "ambient",
                                "components", "lambdas", "phi", "r", "r_grid", "radii", "delta0", "p_kd", "s"};
  const auto colon = message.find(':');
  if (colon != std::string::npos) {
    const std::string head = message.substr(0, colon);
    for (const char* k : known)
      if (head == k) return head;
  }
  return fallback;
}

template <class Fn>
auto as_config(const std::string& field, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field_of(e.what(), field), e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(field, e.what());
  }
}

Rational get_rational(const ExperimentConfig& cfg, const std::string& key, const Rational& fallback) {
  if (!cfg.has(key)) return fallback;
  return as_config(key, [&] { return parse_rational(cfg.get(key)); });
}

std::vector<Rational> rational_list(const ExperimentConfig& cfg, const std::string& key) {
  std::vector<Rational> out;
  for (const auto& t : split(cfg.require(key), ',')) out.push_back(as_config(key, [&] { return parse_rational(t); }));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
  return as_config(key, [&] {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument("not an integer: " + text);
    return static_cast<std::int64_t>(v);
  });
}

std::vector<std::int64_t> int_list(const ExperimentConfig& cfg, const std::string& key) {
  std::vector<std::int64_t> out;
  for (const auto& t : split(cfg.require(key), ',')) out.push_back(parse_int(key, t));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

// "lo..hi", "lo..hi:step" or a comma list.
std::vector<std::int64_t> parse_lambdas(const ExperimentConfig& cfg, const std::string& key) {
  const std::string text = cfg.require(key);
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    auto out = int_list(cfg, key);
    if (!std::is_sorted(out.begin(), out.end()) || std::adjacent_find(out.begin(), out.end()) != out.end())
      throw ConfigError(key, "must be strictly increasing");
    return out;
  }
  std::string rest = text.substr(dots + 2);
  std::int64_t step = 1;
  if (const auto colon = rest.find(':'); colon != std::string::npos) {
    step = parse_int(key, trim(rest.substr(colon + 1)));
    rest = rest.substr(0, colon);
  }
  const std::int64_t lo = parse_int(key, trim(text.substr(0, dots)));
  const std::int64_t hi = parse_int(key, trim(rest));
  if (step < 1 || hi < lo) throw ConfigError(key, "bad range " + text);
  std::vector<std::int64_t> out;
  for (std::int64_t l = lo; l <= hi; l += step) out.push_back(l);
  return out;
}

Family family_of(const ExperimentConfig& cfg) {
  return as_config("family", [&] { return parse_family(cfg.get("family", "ball")); });
}

SurfaceSpec parse_spec(const ExperimentConfig& cfg) {
  SurfaceSpec spec;
  spec.family = family_of(cfg);
  spec.d = static_cast<int>(cfg.get_int("d", 1));
  spec.k = static_cast<int>(cfg.get_int("k", 2));
  spec.ell = static_cast<int>(cfg.get_int("ell", 2));
  if (cfg.has("theta")) spec.theta = get_rational(cfg, "theta", Rational(1, 2));
  spec.width_multiplier = get_rational(cfg, "width_multiplier", Rational(1));
  if (cfg.has("weighting")) {
    const std::string w = cfg.get("weighting");
    if (w == "log" || w == "logarithmic")
      spec.weighting = PrimeWeighting::logarithmic;
    else if (w == "unit")
      spec.weighting = PrimeWeighting::unit;
    else
      throw ConfigError("weighting", "expected log or unit, got " + w);
  }
  if (cfg.has("progressions") || cfg.has("ambient")) {
    ProgressionConstraints pc = ProgressionConstraints::unrestricted(spec.ell);
    if (cfg.has("progressions")) {
      pc.slots.clear();
      for (const auto& t : split(cfg.get("progressions"), ','))
        pc.slots.push_back(as_config("progressions", [&] { return Progression::parse(t); }));
      if (pc.slots.size() == 1) pc.slots.resize(static_cast<std::size_t>(spec.ell), pc.slots.front());
      if (static_cast<int>(pc.slots.size()) != spec.ell)
        throw ConfigError("progressions", "need one class per slot (ell = " + std::to_string(spec.ell) + ")");
    }
    if (cfg.has("ambient")) pc.ambient = as_config("ambient", [&] { return Progression::parse(cfg.get("ambient")); });
    spec.progressions = pc;
  }
  if (cfg.has("components")) {
    // d:k:family entries
    for (const auto& t : split(cfg.get("components"), ',')) {
      const auto parts = split(t, ':');
      if (parts.size() != 3) throw ConfigError("components", "expected d:k:family, got " + t);
      ComponentSpec c;
      c.d = static_cast<int>(parse_int("components", parts[0]));
      c.k = static_cast<int>(parse_int("components", parts[1]));
      c.family = as_config("components", [&] { return parse_family(parts[2]); });
      spec.components.push_back(c);
    }
  }
  as_config("family", [&] { spec.validate(); });
  return spec;
}

NormalizationMode parse_normalization(const ExperimentConfig& cfg, const SurfaceSpec& spec) {
  const std::string kind = cfg.get("normalization", "power_law");
  if (kind == "exact_count") return NormalizationMode::exact_count();
  if (kind != "power_law") throw ConfigError("normalization", "expected power_law or exact_count, got " + kind);
  const Rational phi = get_rational(cfg, "phi", spec.default_phi());
  return as_config("phi", [&] { return NormalizationMode::power_law(phi); });
}

std::optional<Box> parse_box(const ExperimentConfig& cfg, std::size_t dim) {
  if (cfg.has("box_radius")) {
    const std::int64_t r = cfg.get_int("box_radius", 0);
    if (r < 0) throw ConfigError("box_radius", "must be >= 0");
    return Box::cube(dim, -r, r);
  }
  if (!cfg.has("box")) return std::nullopt;
  const std::string text = cfg.get("box");
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw ConfigError("box", "expected lo..hi");
  const std::int64_t lo = parse_int("box", trim(text.substr(0, dots)));
  const std::int64_t hi = parse_int("box", trim(text.substr(dots + 2)));
  if (hi < lo) throw ConfigError("box", "empty box");
  return Box::cube(dim, lo, hi);
}

bool get_bool(const ExperimentConfig& cfg, const std::string& key, bool fallback) {
  if (!cfg.has(key)) return fallback;
  const std::string v = cfg.get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true or false, got " + v);
}

std::string resolve(const ExperimentConfig& cfg, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(cfg.base_dir) / p).string();
}

std::vector<GridFunction> load_inputs(const ExperimentConfig& cfg, const SurfaceSpec& spec) {
  std::vector<GridFunction> fs;
  for (const auto& name : split(cfg.get("inputs"), ',')) {
    const std::string path = resolve(cfg, name);
    if (!std::filesystem::exists(path)) throw ConfigError("inputs", "no such file: " + name);
    fs.push_back(as_config("inputs", [&] { return GridFunction::load(path); }));
  }
  if (static_cast<int>(fs.size()) == 1) fs.resize(static_cast<std::size_t>(spec.ell), fs.front());
  if (static_cast<int>(fs.size()) != spec.ell)
    throw ConfigError("inputs", "need one function per slot (ell = " + std::to_string(spec.ell) + ")");
  for (const auto& f : fs)
    if (static_cast<int>(f.dim()) != spec.d) throw ConfigError("inputs", "dimension does not match d");
  return fs;
}

struct RandomShape {
  std::int64_t support_size = 6;
  std::int64_t radius = 6;
  std::int64_t max_value = 9;
};

RandomShape parse_random_shape(const ExperimentConfig& cfg) {
  RandomShape s;
  s.support_size = cfg.get_int("support_size", s.support_size);
  s.radius = cfg.get_int("support_radius", s.radius);
  s.max_value = cfg.get_int("max_value", s.max_value);
  if (s.support_size < 1) throw ConfigError("support_size", "must be >= 1");
  if (s.radius < 0) throw ConfigError("support_radius", "must be >= 0");
  if (s.max_value < 1) throw ConfigError("max_value", "must be >= 1");
  return s;
}

GridFunction random_function(std::mt19937_64& rng, int d, const RandomShape& shape) {
  std::uniform_int_distribution<std::int64_t> coord(-shape.radius, shape.radius);
  std::uniform_int_distribution<std::int64_t> value(1, shape.max_value);
  GridFunction f(static_cast<std::size_t>(d));
  for (std::int64_t i = 0; i < shape.support_size; ++i) {
    std::vector<std::int64_t> x(static_cast<std::size_t>(d));
    for (auto& c : x) c = coord(rng);
    f.set(LatticePoint(std::move(x)), Rational(static_cast<long>(value(rng))));
  }
  return f;
}

std::string anchor_for(const SurfaceSpec& spec) {
  switch (spec.family) {
    case Family::ball: return "ball slicing: T* <= M_HL(f_1) x M_HL^(l-1)";
    case Family::sphere: return "sphere slicing: M_HL(k-ball) x spherical maximal function";
    case Family::annulus: return "annulus slicing: M_HL x shifted annular maximal function";
    case Family::prime_sphere:
    case Family::prime_ball: return "Waring-Goldbach slicing: M_HL^primes x A*^primes";
    case Family::general_additive: break;
  }
  return "general additive surface";
}

json parameters(const ExperimentConfig& cfg, std::uint64_t seed) {
  json p = json::object();
  for (const auto& [k, v] : cfg.entries) p[k] = v;
  p["seed"] = seed;
  return p;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// ---------------------------------------------------------------- count

RunResult run_count(const ExperimentConfig& cfg, json summary) {
  const SurfaceSpec spec = parse_spec(cfg);
  const std::int64_t L = cfg.get_int("lambda_max", 50);
  if (L < 0) throw ConfigError("lambda_max", "must be >= 0");
  summary["anchor"] = "lattice point counting";
  summary["truncation"] = {{"lambda_min", 0}, {"lambda_max", L}};
  const SurfaceCounter counter(spec, L);
  std::ostringstream csv;
  csv << "anchor,family,mu,factor_level_count,factor_cumulative,surface_size\n";
  const std::string anchor = "lattice point counting";
  RunResult res;
  if (!spec.is_prime()) {
    if (spec.family == Family::general_additive) throw ConfigError("family", "count needs a registered family");
    const auto table = lattice::sphere_count_table(spec.d, spec.k, L);
    BigInt run = 0;
    bool oracle_checked = spec.d <= 3 && L <= 200;
    for (std::int64_t mu = 0; mu <= L; ++mu) {
      const BigInt& c = table[static_cast<std::size_t>(mu)];
      run += c;
      if (oracle_checked && BigInt(static_cast<unsigned long>(lattice::enumerate_sphere(spec.d, spec.k, mu).size())) != c)
        throw InvariantError("sphere count table disagrees with enumeration at mu=" + std::to_string(mu));
      csv << csv_quote(anchor) << ',' << to_string(spec.family) << ',' << mu << ',' << c.get_str() << ','
          << run.get_str() << ',' << counter.size(mu).str() << '\n';
    }
    const BigInt ball = lattice::count_ball(spec.d, spec.k, L);
    if (run != ball) throw InvariantError("sum of sphere counts " + run.get_str() + " != ball count " + ball.get_str());
    summary["results"] = {{"factor_ball_count", ball.get_str()},
                          {"conservation", true},
                          {"enumeration_oracle_checked", oracle_checked},
                          {"surface_size_at_lambda_max", counter.size(L).str()}};
  } else {
    const auto table = primes::prime_sphere_table(spec.d, spec.k, L, spec.weighting, std::nullopt);
    Real run = 0;
    for (std::int64_t mu = 0; mu <= L; ++mu) {
      const auto i = static_cast<std::size_t>(mu);
      const std::string c = spec.weighting == PrimeWeighting::unit ? table.count[i].get_str() : real_str(table.weight[i]);
      run += spec.weighting == PrimeWeighting::unit ? to_real(table.count[i]) : table.weight[i];
      csv << csv_quote(anchor) << ',' << to_string(spec.family) << ',' << mu << ',' << c << ',' << real_str(run) << ','
          << counter.size(mu).str() << '\n';
    }
    summary["results"] = {{"surface_size_at_lambda_max", counter.size(L).str()}};
  }
  summary["verdict"] = "ok";
  res.summary_json = dump(summary);
  res.detail_csv = csv.str();
  return res;
}

// ---------------------------------------------------------------- asymptotics

RunResult run_asymptotic(const ExperimentConfig& cfg, json summary) {
  const SurfaceSpec spec = parse_spec(cfg);
  const auto lambdas = parse_lambdas(cfg, "lambdas");
  const Rational phi = get_rational(cfg, "phi", spec.default_phi());
  const Real tol = to_real(get_rational(cfg, "tolerance", Rational(1, 10)));
  const auto diag = as_config("lambdas", [&] { return asymptotic_diagnostic(spec, lambdas, phi); });
  const bool stable = diag.stabilization <= tol;
  const std::string anchor = "surface size asymptotic lambda^phi";
  summary["anchor"] = anchor;
  summary["truncation"] = {{"lambda_min", lambdas.front()}, {"lambda_max", lambdas.back()}};
  summary["results"] = {{"phi", to_string(phi)},
                        {"stabilization", static_cast<double>(diag.stabilization)},
                        {"tolerance", static_cast<double>(tol)},
                        {"stable", stable}};
  const std::string expect = cfg.get("expect", "none");
  if (expect != "none" && expect != "stable" && expect != "unstable")
    throw ConfigError("expect", "expected stable, unstable or none");
  const bool claim = expect == "none" || (expect == "stable") == stable;
  summary["verdict"] = stable ? "stable" : "unstable";
  summary["claim"] = {{"expect", expect}, {"pass", claim}};
  std::ostringstream csv;
  csv << "anchor,lambda,count,ratio\n";
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    csv << csv_quote(anchor) << ',' << lambdas[i] << ',' << diag.counts[i].str() << ',' << real_str(diag.ratios[i])
        << '\n';
  RunResult res;
  res.exit_code = claim ? exit_ok : exit_claim_failed;
  res.summary_json = dump(summary);
  res.detail_csv = csv.str();
  return res;
}

// ---------------------------------------------------------------- operator

std::vector<GridFunction> inputs_or_random(const ExperimentConfig& cfg, const SurfaceSpec& spec, std::mt19937_64& rng) {
  if (cfg.has("inputs")) return load_inputs(cfg, spec);
  const RandomShape shape = parse_random_shape(cfg);
  std::vector<GridFunction> fs;
  for (int i = 0; i < spec.ell; ++i) fs.push_back(random_function(rng, spec.d, shape));
  return fs;
}

MaximalConfig parse_maximal(const ExperimentConfig& cfg, const SurfaceSpec& spec) {
  MaximalConfig mc;
  mc.lambdas = parse_lambdas(cfg, "lambdas");
  mc.normalization = parse_normalization(cfg, spec);
  mc.allow_zero = get_bool(cfg, "allow_zero", false);
  as_config("lambdas", [&] { mc.validate(); });
  return mc;
}

RunResult run_operator(const ExperimentConfig& cfg, json summary, std::mt19937_64& rng) {
  const SurfaceSpec spec = parse_spec(cfg);
  const auto fs = inputs_or_random(cfg, spec, rng);
  const MaximalConfig mc = parse_maximal(cfg, spec);
  const auto box = parse_box(cfg, static_cast<std::size_t>(spec.d));
  const ValueField field = as_config("family", [&] { return maximal_function(spec, fs, mc, box); });
  const std::string anchor = "multilinear maximal function T*";
  summary["anchor"] = anchor;
  summary["truncation"] = {{"lambda_min", mc.lambdas.front()}, {"lambda_max", mc.lambdas.back()}};
  json norms = json::object();
  for (const auto& t : split(cfg.get("norms", "1,2,inf"), ',')) {
    const LpExponent p = as_config("norms", [&] { return LpExponent::parse(t); });
    norms[p.str()] = lp_norm(field, p).str();
  }
  json results = {{"box", field.box.str()}, {"surface", spec.describe()}, {"normalization", mc.normalization.str()},
                  {"norms", norms}};
  if (cfg.has("probe_p") || cfg.has("probe_r")) {
    ProbeExponents exps;
    for (const auto& t : split(cfg.require("probe_p"), ','))
      exps.p.push_back(as_config("probe_p", [&] { return LpExponent::parse(t); }));
    if (static_cast<int>(exps.p.size()) != spec.ell) throw ConfigError("probe_p", "need one exponent per slot");
    exps.r = as_config("probe_r", [&] { return LpExponent::parse(cfg.require("probe_r")); });
    results["ratio_norm_probe"] = ratio_norm_probe(spec, exps, {fs}, mc, box).str();
  }
  summary["results"] = results;
  summary["verdict"] = "ok";
  std::ostringstream csv;
  csv << "anchor,x,value,approx\n";
  for (std::size_t i = 0; i < field.values.size(); ++i)
    if (!field.values[i].is_zero())
      csv << csv_quote(anchor) << ',' << csv_quote(field.box.point(i).str()) << ',' << field.values[i].str() << ','
          << real_str(field.values[i].approx()) << '\n';
  RunResult res;
  res.summary_json = dump(summary);
  res.detail_csv = csv.str();
  return res;
}

// ---------------------------------------------------------------- slicing

Value direct_lhs(const SurfaceSpec& spec, const std::vector<GridFunction>& fs, const MaximalConfig& mc,
                 const LatticePoint& x) {
  Value best;
  for (std::int64_t l : mc.lambdas) {
    Value v = multilinear_average(spec, fs, l, mc.normalization, x);
    if (compare(v, best) > 0) best = v;
  }
  return best;
}

bool same_value(const Value& a, const Value& b) {
  if (a.is_exact() && b.is_exact()) return compare(a, b) == 0;
  const Real scale = std::max<Real>(1, std::max(std::fabs(a.approx()), std::fabs(b.approx())));
  return std::fabs(a.approx() - b.approx()) <= 1e-12L * scale;
}

// Orders differences; exact when both are exact.
bool worse(const Difference& a, const Difference& b) {
  if (a.exact && b.exact) return *a.exact > *b.exact;
  if (a.sign != b.sign) return a.sign > b.sign;
  return a.approx > b.approx;
}

RunResult run_slicing(const ExperimentConfig& cfg, json summary, std::mt19937_64& rng) {
  const SurfaceSpec spec = parse_spec(cfg);
  MaximalConfig mc = parse_maximal(cfg, spec);
  const auto box = parse_box(cfg, static_cast<std::size_t>(spec.d));
  const std::int64_t instances = cfg.has("inputs") ? 1 : cfg.get_int("instances", 1);
  if (instances < 1) throw ConfigError("instances", "must be >= 1");
  SliceOptions opts;
  if (cfg.has("slot")) opts.slot = static_cast<int>(cfg.get_int("slot", 0));
  const std::string depth = cfg.get("depth", "full");
  if (depth == "one_step")
    opts.depth = SliceDepth::one_step;
  else if (depth != "full")
    throw ConfigError("depth", "expected full or one_step");
  opts.box = box;
  opts.ignore_preconditions = get_bool(cfg, "ignore_preconditions", false);
  opts.keep_rows = get_bool(cfg, "keep_rows", instances == 1);
  const bool literal = get_bool(cfg, "literal_ratio", false);
  if (literal && (spec.family != Family::annulus || spec.ell != 2))
    throw ConfigError("literal_ratio", "only for the bilinear annulus");

  const std::string anchor = anchor_for(spec);
  std::ostringstream csv, points;
  csv << "anchor,instance," << DominationReport::csv_header();
  if (literal) csv << ",literal_ratio";
  csv << '\n';
  points << "anchor,instance,x,lhs,rhs,lhs_minus_rhs\n";
  std::size_t dominated = 0, violated = 0, not_applicable = 0, total_violations = 0;
  std::optional<Difference> worst;
  std::string worst_witness, worst_lhs, worst_rhs, rhs_id, reason;
  std::int64_t worst_instance = -1;
  Real worst_literal = 0;
  for (std::int64_t inst = 0; inst < instances; ++inst) {
    const auto fs = inputs_or_random(cfg, spec, rng);
    const DominationReport rep = as_config("family", [&] { return verify_domination(spec, fs, mc, opts); });
    rhs_id = rep.rhs_id;
    csv << csv_quote(anchor) << ',' << inst << ',' << rep.csv_summary_row();
    if (literal) {
      const Real q = annulus_literal_ratio(spec, fs, mc, box);
      worst_literal = std::max(worst_literal, q);
      csv << ',' << real_str(q);
    }
    csv << '\n';
    for (const auto& row : rep.rows)
      points << csv_quote(anchor) << ',' << inst << ',' << csv_quote(row.x.str()) << ',' << row.lhs.str() << ','
             << row.rhs.str() << ',' << row.diff.str() << '\n';
    switch (rep.verdict) {
      case DominationReport::Verdict::not_applicable:
        ++not_applicable;
        reason = rep.reason;
        continue;
      case DominationReport::Verdict::dominated: ++dominated; break;
      case DominationReport::Verdict::violated: ++violated; break;
    }
    total_violations += rep.violations;
    if (rep.witness) {
      const Value again = direct_lhs(spec, fs, mc, *rep.witness);
      if (!same_value(again, rep.lhs_at_witness))
        throw InvariantError("direct evaluation at witness " + rep.witness->str() + " gives " + again.str() +
                             ", report has " + rep.lhs_at_witness.str());
      const Difference d = difference(rep.lhs_at_witness, rep.rhs_at_witness);
      if (d.sign != rep.max_violation.sign || (d.exact && rep.max_violation.exact && *d.exact != *rep.max_violation.exact))
        throw InvariantError("lhs - rhs at the witness does not reproduce max_violation");
    }
    if (!worst || worse(rep.max_violation, *worst)) {
      worst = rep.max_violation;
      worst_instance = inst;
      worst_witness = rep.witness ? rep.witness->str() : "";
      worst_lhs = rep.lhs_at_witness.str();
      worst_rhs = rep.rhs_at_witness.str();
    }
  }
  summary["anchor"] = anchor;
  summary["truncation"] = {{"lambda_min", mc.lambdas.front()}, {"lambda_max", mc.lambdas.back()}};
  json results = {{"instances", instances},
                  {"dominated", dominated},
                  {"violated", violated},
                  {"not_applicable", not_applicable},
                  {"violating_points", total_violations},
                  {"rhs", rhs_id},
                  {"surface", spec.describe()}};
  if (worst) {
    results["max_violation"] = worst->str();
    results["max_violation_instance"] = worst_instance;
    results["witness"] = worst_witness;
    results["lhs_at_witness"] = worst_lhs;
    results["rhs_at_witness"] = worst_rhs;
  }
  if (not_applicable) results["not_applicable_reason"] = reason;
  if (literal) results["literal_ratio_max"] = static_cast<double>(worst_literal);
  summary["results"] = results;
  const char* verdict = violated ? "violated" : dominated ? "dominated" : "not_applicable";
  summary["verdict"] = verdict;
  RunResult res;
  res.exit_code = violated ? exit_claim_failed : exit_ok;
  res.summary_json = dump(summary);
  res.detail_csv = csv.str();
  if (opts.keep_rows) res.extra_files["points.csv"] = points.str();
  return res;
}

// ---------------------------------------------------------------- framework

RunResult run_framework(const ExperimentConfig& cfg, json summary) {
  const std::string which = cfg.get("surfaces", "presets");
  std::vector<FrameworkSurface> surfaces;
  std::string expect_default = "pass";
  if (which == "presets") {
    surfaces = framework_presets();
  } else if (which == "multiplicative") {
    surfaces.push_back(multiplicative_surface(static_cast<int>(cfg.get_int("d", 1))));
    expect_default = "fail";
  } else if (which == "spec") {
    const SurfaceSpec spec = parse_spec(cfg);
    surfaces.push_back(as_config("family", [&] { return framework_surface(spec, cfg.get_int("onset", 1)); }));
    expect_default = "none";
  } else {
    throw ConfigError("surfaces", "expected presets, multiplicative or spec");
  }
  const std::string expect = cfg.get("expect", expect_default);
  if (expect != "pass" && expect != "fail" && expect != "none") throw ConfigError("expect", "expected pass, fail or none");
  const std::string anchor = "additive-surface framework conditions 1-5";
  std::ostringstream csv;
  csv << "anchor,surface,condition,pass,witness,detail\n";
  json rows = json::array();
  bool claim = true;
  for (const auto& s : surfaces) {
    FrameworkProbe probe;
    probe.lambda_max = cfg.get_int("lambda_max", s.suggested_lambda_max);
    probe.max_dimension = static_cast<int>(cfg.get_int("max_dimension", probe.max_dimension));
    const FrameworkReport rep = check_framework(s, probe);
    json conds = json::array();
    for (std::size_t i = 0; i < rep.conditions.size(); ++i) {
      const auto& c = rep.conditions[i];
      conds.push_back({{"condition", i + 1}, {"pass", c.pass}, {"witness", c.witness}});
      csv << csv_quote(anchor) << ',' << csv_quote(rep.surface) << ',' << i + 1 << ',' << (c.pass ? "true" : "false")
          << ',' << csv_quote(c.witness) << ',' << csv_quote(c.detail) << '\n';
    }
    rows.push_back({{"surface", rep.surface},
                    {"overall", rep.overall},
                    {"onset", rep.onset},
                    {"lambda_max", rep.lambda_max},
                    {"holes_below_onset", rep.holes_below_onset},
                    {"conditions", conds}});
    if (expect == "pass" && !rep.overall) claim = false;
    if (expect == "fail" && rep.overall) claim = false;
  }
  summary["anchor"] = anchor;
  summary["results"] = {{"surfaces", rows}};
  summary["claim"] = {{"expect", expect}, {"pass", claim}};
  summary["verdict"] = claim ? "ok" : "claim_failed";
  RunResult res;
  res.exit_code = claim ? exit_ok : exit_claim_failed;
  res.summary_json = dump(summary);
  res.detail_csv = csv.str();
  return res;
}

// ---------------------------------------------------------------- sharpness

RunResult run_sharpness(const ExperimentConfig& cfg, json summary) {
  const SurfaceSpec spec = parse_spec(cfg);
  const auto grid = rational_list(cfg, "r_grid");
  const auto radii = cfg.has("radii") ? int_list(cfg, "radii") : sharpness::default_radii(spec.k);
  const auto est = as_config("r_grid", [&] { return sharpness::estimate_critical_exponent(spec, grid, radii); });
  const Rational rc = as_config("family", [&] { return exponents::critical_r(spec.family, spec.d, spec.k, spec.ell, spec.theta); });
  const bool contains = (!est.lower || *est.lower <= rc) && (!est.upper || rc <= *est.upper);
  json results = {{"critical_r", to_string(rc)},
                  {"critical_r_approx", static_cast<double>(to_real(rc))},
                  {"bracket_lower", est.lower ? to_string(*est.lower) : ""},
                  {"bracket_upper", est.upper ? to_string(*est.upper) : ""},
                  {"one_sided", est.one_sided},
                  {"contains_critical_r", contains},
                  {"radii", radii}};
  bool claim = contains && !est.one_sided;
  if (est.lower && est.upper) {
    const Rational width = *est.upper - *est.lower;
    results["bracket_width"] = to_string(width);
    if (cfg.has("max_width")) {
      const bool narrow = width <= get_rational(cfg, "max_width", Rational(1));
      results["within_max_width"] = narrow;
      claim = claim && narrow;
    }
  }
  if (cfg.has("delta0")) {
    const Rational delta0 = get_rational(cfg, "delta0", Rational(0));
    const Rational pkd = cfg.has("p_kd") ? get_rational(cfg, "p_kd", Rational(2))
                                         : as_config("p_kd", [&] { return exponents::default_p_kd(spec.d); });
    const auto se = as_config("delta0", [&] {
      return exponents::sufficient_r_and_p(spec.family, spec.d, spec.k, spec.ell, delta0, pkd);
    });
    results["sufficient"] = {{"r0", to_string(se.r0)},
                             {"p0", to_string(se.p0)},
                             {"sphere_threshold", to_string(se.sphere_threshold)},
                             {"prime_threshold", to_string(se.prime_threshold)}};
  }
  summary["anchor"] = "necessary condition r > r_c via Dirac deltas";
  summary["truncation"] = {{"radius_min", radii.front()}, {"radius_max", radii.back()}};
  summary["results"] = results;
  summary["claim"] = {{"bracket_contains_critical_r", claim}};
  summary["verdict"] = est.str();
  std::string body = sharpness::csv(spec, est);
  // Prefix every row with the anchor column.
  std::ostringstream csv;
  std::istringstream is(body);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    csv << (header ? std::string("anchor") : csv_quote("necessary condition r > r_c")) << ',' << line << '\n';
    header = false;
  }
  RunResult res;
  res.exit_code = claim ? exit_ok : exit_claim_failed;
  res.summary_json = dump(summary);
  res.detail_csv = csv.str();
  return res;
}

// ---------------------------------------------------------------- progressions

RunResult run_progressions(const ExperimentConfig& cfg, json summary) {
  const std::string anchor = "allowable progressions and sumset condition";
  std::ostringstream csv;
  csv << "anchor,check,lambda,class,result\n";
  json results = json::object();
  bool claim = true;
  std::vector<Progression> slots;
  for (const auto& t : split(cfg.require("progressions"), ','))
    slots.push_back(as_config("progressions", [&] { return Progression::parse(t); }));
  if (slots.empty()) throw ConfigError("progressions", "empty list");
  const Progression ambient =
      cfg.has("ambient") ? as_config("ambient", [&] { return Progression::parse(cfg.get("ambient")); }) : Progression::all();
  const auto sum = primes::sumset_check(slots, ambient);
  results["sumset_equal"] = sum.equal;
  results["modulus"] = sum.modulus;
  results["sumset"] = sum.sumset;
  if (sum.witness) {
    results["witness"] = *sum.witness;
    results["witness_in_sumset"] = sum.witness_in_sumset;
  }
  csv << csv_quote(anchor) << ",sumset,," << csv_quote(ambient.str()) << ',' << (sum.equal ? "equal" : "different")
      << '\n';
  if (cfg.has("expect_sumset")) {
    const bool want = get_bool(cfg, "expect_sumset", true);
    if (want != sum.equal) claim = false;
  }
  if (cfg.has("lambdas")) {
    for (std::int64_t l : parse_lambdas(cfg, "lambdas")) {
      for (const auto& g : slots)
        csv << csv_quote(anchor) << ",slot_membership," << l << ',' << csv_quote(g.str()) << ','
            << (primes::progression_membership(l, g) ? "member" : "outside") << '\n';
      csv << csv_quote(anchor) << ",ambient_membership," << l << ',' << csv_quote(ambient.str()) << ','
          << (primes::progression_membership(l, ambient) ? "member" : "outside") << '\n';
    }
  }
  if (cfg.has("parity_lambda_max")) {
    const int d = static_cast<int>(cfg.get_int("parity_d", 2));
    const int k = static_cast<int>(cfg.get_int("parity_k", 3));
    const std::int64_t L = cfg.get_int("parity_lambda_max", 0);
    std::int64_t failures = 0, verified = 0, vacuous = 0, solutions = 0;
    for (std::int64_t l = 2; l <= L; l += 2) {
      const auto rep = as_config("parity_d", [&] {
        return primes::parity_rearrangement_check(d, k, l, iroot(l, static_cast<unsigned>(k)));
      });
      solutions += rep.solutions;
      const char* status = "vacuous";
      switch (rep.status) {
        case primes::ParityRearrangementReport::Status::verified:
          ++verified;
          status = "verified";
          break;
        case primes::ParityRearrangementReport::Status::failure:
          ++failures;
          status = "failure";
          break;
        case primes::ParityRearrangementReport::Status::vacuous: ++vacuous; break;
      }
      csv << csv_quote(anchor) << ",parity_rearrangement," << l << ",," << csv_quote(std::string(status) + " " + rep.summary())
          << '\n';
    }
    results["parity"] = {{"d", d}, {"k", k}, {"lambda_max", L}, {"verified", verified},
                         {"vacuous", vacuous}, {"failures", failures}, {"solutions", solutions}};
    if (failures) claim = false;
  }
  summary["anchor"] = anchor;
  summary["results"] = results;
  summary["claim"] = {{"pass", claim}};
  summary["verdict"] = claim ? "ok" : "claim_failed";
  RunResult res;
  res.exit_code = claim ? exit_ok : exit_claim_failed;
  res.summary_json = dump(summary);
  res.detail_csv = csv.str();
  return res;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
    if (cfg.entries.count(key)) throw ConfigError(key, "given twice");
    cfg.entries[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg = parse(ss.str());
  cfg.base_dir = std::filesystem::path(path).parent_path().string();
  if (cfg.base_dir.empty()) cfg.base_dir = ".";
  return cfg;
}

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
  const auto it = entries.find(key);
  return it == entries.end() ? fallback : it->second;
}

std::string ExperimentConfig::require(const std::string& key) const {
  const auto it = entries.find(key);
  if (it == entries.end() || it->second.empty()) throw ConfigError(key, "missing");
  return it->second;
}

std::int64_t ExperimentConfig::get_int(const std::string& key, std::int64_t fallback) const {
  return has(key) ? parse_int(key, get(key)) : fallback;
}

const std::vector<ExperimentInfo>& experiment_kinds() {
  static const std::vector<ExperimentInfo> kinds = {
      {"count", "level-set and cumulative lattice counts with the conservation check"},
      {"diagnose_asymptotic", "surface size against lambda^phi over a lambda range"},
      {"evaluate_operator", "truncated multilinear maximal function on a box, with l^p norms"},
      {"verify_slicing", "exact check of T* <= product of linear maximal functions"},
      {"framework_check", "conditions 1-5 for additive surfaces"},
      {"sharpness", "Dirac-delta series bracket for the critical exponent"},
      {"progressions", "residue-class membership, sumset condition and parity rearrangement"},
  };
  return kinds;
}

RunResult run_experiment(const ExperimentConfig& config, std::optional<std::uint64_t> seed) {
  const std::string kind = config.experiment();
  const std::uint64_t s = seed ? *seed : static_cast<std::uint64_t>(config.get_int("seed", 1));
  std::mt19937_64 rng(s);
  json summary = json::object();
  summary["experiment"] = kind;
  summary["parameters"] = parameters(config, s);
  if (kind == "count") return run_count(config, summary);
  if (kind == "diagnose_asymptotic") return run_asymptotic(config, summary);
  if (kind == "evaluate_operator") return run_operator(config, summary, rng);
  if (kind == "verify_slicing") return run_slicing(config, summary, rng);
  if (kind == "framework_check") return run_framework(config, summary);
  if (kind == "sharpness") return run_sharpness(config, summary);
  if (kind == "progressions") return run_progressions(config, summary);
  throw ConfigError("experiment", "unknown kind " + kind);
}

void write_outputs(const RunResult& result, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(std::filesystem::path(out_dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + name);
    out << body;
  };
  write("summary.json", result.summary_json);
  write("detail.csv", result.detail_csv);
  for (const auto& [name, body] : result.extra_files) write(name, body);
}

}  // namespace dmslice
