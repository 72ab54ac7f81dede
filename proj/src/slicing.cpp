#include "dmslice/slicing.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

#include "dmslice/primes.hpp"

namespace dmslice {

namespace {

constexpr Real kRelativeTolerance = 1e-9L;

std::string slot_name(std::size_t i) { return "f" + std::to_string(i + 1); }

LinearKind hl_kind(const SurfaceSpec& spec, int slot) {
  if (spec.is_prime()) return LinearKind::prime_hl(spec.k, spec.slot_progression(slot), spec.weighting);
  return LinearKind::hl_ball(spec.k);
}

std::vector<std::int64_t> zero_to(std::int64_t L) {
  std::vector<std::int64_t> out;
  for (std::int64_t e = 0; e <= L; ++e) out.push_back(e);
  return out;
}

ValueField zero_field(const Box& box) { return {box, std::vector<Value>(box.size())}; }

// The factor absorbing the level-set condition in slot j.
SlicedBound last_factor(const SurfaceSpec& spec, const GridFunction& f, const MaximalConfig& config, const Box& box,
                        int j) {
  const std::int64_t L = config.max_lambda();
  const std::string arg = "[" + slot_name(static_cast<std::size_t>(j)) + "]";
  switch (spec.family) {
    case Family::ball:
    case Family::prime_ball: {
      LinearKind kind = hl_kind(spec, j);
      return {linear_maximal(kind, f, config.lambdas, box), kind.str() + arg};
    }
    case Family::sphere: {
      LinearKind kind = LinearKind::sphere(spec.k);
      return {linear_maximal(kind, f, zero_to(L), box, true), kind.str() + "{eta<=" + std::to_string(L) + "}" + arg};
    }
    case Family::annulus: {
      LinearKind kind = LinearKind::shifted_annulus(*spec.theta, spec.width_multiplier);
      return {linear_maximal(kind, f, config.lambdas, box), kind.str() + arg};
    }
    case Family::prime_sphere: {
      const Progression& gamma = spec.slot_progression(j);
      std::vector<std::int64_t> etas;
      for (std::int64_t e = 1; e <= L; ++e)
        if (gamma.contains(e)) etas.push_back(e);
      LinearKind kind = LinearKind::prime_sphere(spec.k, gamma, spec.weighting);
      const std::string id = kind.str() + "{eta<=" + std::to_string(L) + "}" + arg;
      if (etas.empty()) return {zero_field(box), id};
      return {linear_maximal(kind, f, etas, box), id};
    }
    case Family::general_additive: break;
  }
  throw std::invalid_argument("family: general_additive has no registered linear factors");
}

bool greater(const Difference& a, const Difference& b) {
  if (a.sign != b.sign) return a.sign > b.sign;
  if (a.exact && b.exact) return *a.exact > *b.exact;
  return a.approx > b.approx;
}

}  // namespace

SlicedBound slice_rhs(const SurfaceSpec& spec, const std::vector<GridFunction>& fs, const MaximalConfig& config,
                      const SliceOptions& options) {
  spec.validate();
  config.validate();
  if (spec.family == Family::general_additive)
    throw std::invalid_argument("family: general_additive has no registered linear factors");
  if (static_cast<int>(fs.size()) != spec.ell) throw std::invalid_argument("need exactly ell input functions");
  const Box box = options.box ? *options.box : default_box(spec, fs, config.max_lambda());
  const int ell = spec.ell;

  if (ell == 1) {
    LinearKind kind;
    switch (spec.family) {
      case Family::ball: kind = LinearKind::hl_ball(spec.k); break;
      case Family::sphere: kind = LinearKind::sphere(spec.k); break;
      case Family::annulus: kind = LinearKind::annulus(*spec.theta, spec.width_multiplier); break;
      case Family::prime_ball: kind = hl_kind(spec, 0); break;
      case Family::prime_sphere:
        kind = LinearKind::prime_sphere(spec.k, spec.slot_progression(0), spec.weighting);
        break;
      case Family::general_additive: break;
    }
    return {linear_maximal(kind, fs[0], config.lambdas, box, config.allow_zero), kind.str() + "[f1]"};
  }

  if (options.depth == SliceDepth::one_step) {
    if (spec.family != Family::ball && spec.family != Family::sphere)
      throw std::invalid_argument("depth: one-step slicing is available for ball and sphere families");
    const int i = options.slot.value_or(0);
    if (i < 0 || i >= ell) throw std::invalid_argument("slot: out of range");
    LinearKind kind = hl_kind(spec, i);
    ValueField field = linear_maximal(kind, fs[static_cast<std::size_t>(i)], config.lambdas, box);
    std::vector<GridFunction> rest;
    std::string rest_ids;
    for (int s = 0; s < ell; ++s)
      if (s != i) {
        rest.push_back(fs[static_cast<std::size_t>(s)]);
        rest_ids += (rest_ids.empty() ? "" : ",") + slot_name(static_cast<std::size_t>(s));
      }
    const SurfaceSpec sub = spec.with_ell(ell - 1);
    MaximalConfig sub_config;
    if (spec.family == Family::ball) {
      sub_config.lambdas = config.lambdas;
    } else {
      sub_config.lambdas = zero_to(config.max_lambda());
      sub_config.allow_zero = true;
    }
    sub_config.normalization = {NormalizationMode::Kind::power_law, sub.default_phi()};
    field = field * maximal_function(sub, rest, sub_config, box);
    return {std::move(field), kind.str() + "[" + slot_name(static_cast<std::size_t>(i)) + "]*T*" + sub.describe() +
                                  "[" + rest_ids + "]"};
  }

  const int j = options.slot.value_or(ell - 1);
  if (j < 0 || j >= ell) throw std::invalid_argument("slot: out of range");
  std::optional<ValueField> field;
  std::string id;
  for (int i = 0; i < ell; ++i) {
    if (i == j) continue;
    LinearKind kind = hl_kind(spec, i);
    ValueField m = linear_maximal(kind, fs[static_cast<std::size_t>(i)], config.lambdas, box);
    field = field ? *field * m : std::move(m);
    id += (id.empty() ? "" : "*") + kind.str() + "[" + slot_name(static_cast<std::size_t>(i)) + "]";
  }
  SlicedBound last = last_factor(spec, fs[static_cast<std::size_t>(j)], config, box, j);
  return {*field * last.field, id + "*" + last.id};
}

std::string to_string(DominationReport::Verdict v) {
  switch (v) {
    case DominationReport::Verdict::dominated: return "dominated";
    case DominationReport::Verdict::violated: return "violated";
    case DominationReport::Verdict::not_applicable: return "not_applicable";
  }
  return "?";
}

DominationReport verify_domination(const SurfaceSpec& spec, const std::vector<GridFunction>& fs,
                                   const MaximalConfig& config, const SliceOptions& options) {
  spec.validate();
  config.validate();
  DominationReport report;
  report.lhs_id = "T*" + spec.describe() + "/" + config.normalization.str();
  report.lambda_min = config.lambdas.front();
  report.lambda_max = config.lambdas.back();
  auto not_applicable = [&](std::string why) {
    report.verdict = DominationReport::Verdict::not_applicable;
    report.reason = std::move(why);
    return report;
  };
  if (spec.family == Family::general_additive) return not_applicable("no registered linear factors");
  if (!options.ignore_preconditions) {
    const Rational phi = spec.default_phi();
    if (config.normalization.kind != NormalizationMode::Kind::power_law || config.normalization.phi != phi)
      return not_applicable("left side must use the power law with phi = " + to_string(phi));
    if ((spec.family == Family::sphere || spec.family == Family::prime_sphere) && spec.d < spec.k)
      return not_applicable("d < k: lambda^-(d/k-1) <= eta^-(d/k-1) fails");
    if (spec.is_prime()) {
      const auto sum = primes::sumset_check(spec.progressions->slots, spec.progressions->ambient);
      if (!sum.equal)
        return not_applicable("sumset of slot progressions differs from the ambient class (residue " +
                              std::to_string(*sum.witness) + " mod " + std::to_string(sum.modulus) + ")");
    }
  }

  const Box box = options.box ? *options.box : default_box(spec, fs, config.max_lambda());
  SliceOptions opts = options;
  opts.box = box;
  report.box = box;
  const ValueField lhs = maximal_function(spec, fs, config, box);
  SlicedBound rhs = slice_rhs(spec, fs, config, opts);
  report.rhs_id = rhs.id;
  report.points = box.size();

  const bool exact_mode = !(spec.is_prime() && spec.weighting == PrimeWeighting::logarithmic);
  report.tolerance = exact_mode ? 0 : kRelativeTolerance;
  std::optional<std::size_t> arg;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Value& a = lhs.values[i];
    const Value& b = rhs.field.values[i];
    Difference diff = difference(a, b);
    bool violation = diff.sign > 0;
    if (violation && !exact_mode) violation = a.approx() > b.approx() * (1 + kRelativeTolerance);
    if (violation) ++report.violations;
    if (!arg || greater(diff, report.max_violation)) {
      arg = i;
      report.max_violation = diff;
    }
    if (options.keep_rows) report.rows.push_back({box.point(i), a, b, diff});
  }
  report.witness = box.point(*arg);
  report.lhs_at_witness = lhs.values[*arg];
  report.rhs_at_witness = rhs.field.values[*arg];
  report.verdict = report.violations == 0 ? DominationReport::Verdict::dominated : DominationReport::Verdict::violated;
  return report;
}

std::string DominationReport::csv_header() {
  return "lhs,rhs,box,lambda_min,lambda_max,points,violations,max_violation,witness,lhs_at_witness,rhs_at_witness,"
         "tolerance,verdict,reason";
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string real_str(Real r) {
  std::ostringstream os;
  os.precision(12);
  os << r;
  return os.str();
}

}  // namespace

std::string DominationReport::csv_summary_row() const {
  std::ostringstream os;
  const bool evaluated = verdict != Verdict::not_applicable;
  os << quote(lhs_id) << ',' << quote(rhs_id) << ',' << quote(box ? box->str() : "") << ',' << lambda_min << ','
     << lambda_max << ',' << points << ',' << violations << ',' << (evaluated ? max_violation.str() : "") << ','
     << quote(witness ? witness->str() : "") << ',' << (evaluated ? lhs_at_witness.str() : "") << ','
     << (evaluated ? rhs_at_witness.str() : "") << ',' << real_str(tolerance) << ',' << to_string(verdict) << ','
     << quote(reason);
  return os.str();
}

std::string DominationReport::csv_rows() const {
  std::ostringstream os;
  os << "x,lhs,rhs,lhs_minus_rhs\n";
  for (const auto& r : rows)
    os << quote(r.x.str()) << ',' << r.lhs.str() << ',' << r.rhs.str() << ',' << r.diff.str() << '\n';
  return os.str();
}

std::string DominationReport::str() const {
  std::ostringstream os;
  os << to_string(verdict);
  if (verdict == Verdict::not_applicable) {
    os << " (" << reason << ")";
    return os.str();
  }
  os << " max_violation=" << max_violation.str() << " witness=" << (witness ? witness->str() : "-")
     << " violations=" << violations << "/" << points;
  return os.str();
}

Real annulus_literal_ratio(const SurfaceSpec& spec, const std::vector<GridFunction>& fs, const MaximalConfig& config,
                           const std::optional<Box>& box) {
  if (spec.family != Family::annulus || spec.ell != 2)
    throw std::invalid_argument("family: literal annular ratio needs a bilinear annulus");
  const Box b = box ? *box : default_box(spec, fs, config.max_lambda());
  const ValueField lhs = maximal_function(spec, fs, config, b);
  const ValueField hl = linear_maximal(LinearKind::hl_ball(2), fs[1], config.lambdas, b);
  const ValueField ann = linear_maximal(LinearKind::annulus(*spec.theta, spec.width_multiplier), fs[0], config.lambdas, b);
  Real worst = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Real num = lhs.values[i].approx();
    const Real den = hl.values[i].approx() * ann.values[i].approx();
    if (num == 0) continue;
    if (den == 0) return std::numeric_limits<Real>::infinity();
    worst = std::max(worst, num / den);
  }
  return worst;
}

}  // namespace dmslice
