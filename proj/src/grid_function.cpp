#include "dmslice/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dmslice {

GridFunction::GridFunction(std::size_t dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("grid function dimension must be >= 1");
}

GridFunction GridFunction::delta(std::size_t dim) { return delta(LatticePoint::origin(dim)); }

GridFunction GridFunction::delta(const LatticePoint& at) {
  GridFunction f(at.dim());
  f.set(at, Rational(1));
  return f;
}

void GridFunction::set(const LatticePoint& x, const Rational& v) {
  if (x.dim() != dim_) throw std::invalid_argument("point dimension does not match grid function");
  if (v < 0) throw std::invalid_argument("grid function values must be non-negative");
  if (v == 0)
    values_.erase(x);
  else
    values_[x] = v;
}

Rational GridFunction::at(const LatticePoint& x) const {
  auto it = values_.find(x);
  return it == values_.end() ? Rational(0) : it->second;
}

GridFunction GridFunction::translate(const LatticePoint& shift) const {
  GridFunction out(dim_);
  for (const auto& [x, v] : values_) out.values_.emplace(x + shift, v);
  return out;
}

GridFunction GridFunction::scale(const Rational& c) const {
  if (c < 0) throw std::invalid_argument("scale factor must be non-negative");
  GridFunction out(dim_);
  if (c == 0) return out;
  for (const auto& [x, v] : values_) out.values_.emplace(x, Rational(v * c));
  return out;
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("dimension mismatch in grid function sum");
  GridFunction out = a;
  for (const auto& [x, v] : b.values_) out.set(x, out.at(x) + v);
  return out;
}

std::string GridFunction::serialize() const {
  std::ostringstream os;
  for (const auto& [x, v] : values_) {
    for (std::size_t i = 0; i < dim_; ++i) os << x[i] << ' ';
    os << v.get_num() << '/' << v.get_den() << '\n';
  }
  return os.str();
}

GridFunction GridFunction::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::map<LatticePoint, Rational> values;
  std::size_t dim = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (tokens.size() < 2) throw std::invalid_argument(where + ": expected coordinates and a value");
    if (dim == 0) dim = tokens.size() - 1;
    if (tokens.size() - 1 != dim) throw std::invalid_argument(where + ": inconsistent dimension");
    std::vector<std::int64_t> coords;
    for (std::size_t i = 0; i < dim; ++i) {
      std::size_t used = 0;
      long long c = 0;
      try {
        c = std::stoll(tokens[i], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tokens[i].size()) throw std::invalid_argument(where + ": bad coordinate '" + tokens[i] + "'");
      coords.push_back(c);
    }
    Rational v = parse_rational(tokens.back());
    if (v < 0) throw std::invalid_argument(where + ": negative value");
    LatticePoint x(std::move(coords));
    if (values.count(x)) throw std::invalid_argument(where + ": duplicate point " + x.str());
    values.emplace(std::move(x), v);
  }
  if (dim == 0) throw std::invalid_argument("grid function file has no points");
  GridFunction f(dim);
  for (auto& [x, v] : values) f.set(x, v);
  return f;
}

GridFunction GridFunction::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open grid function file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void GridFunction::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize();
}

Box Box::cube(std::size_t dim, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("box lower corner exceeds upper corner");
  return {LatticePoint(std::vector<std::int64_t>(dim, lo)), LatticePoint(std::vector<std::int64_t>(dim, hi))};
}

std::size_t Box::size() const {
  std::size_t n = 1;
  for (std::size_t i = 0; i < dim(); ++i) n *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
  return n;
}

bool Box::contains(const LatticePoint& x) const {
  if (x.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

std::size_t Box::index_of(const LatticePoint& x) const {
  if (!contains(x)) throw std::out_of_range("point " + x.str() + " outside box " + str());
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dim(); ++i)
    idx = idx * static_cast<std::size_t>(hi[i] - lo[i] + 1) + static_cast<std::size_t>(x[i] - lo[i]);
  return idx;
}

LatticePoint Box::point(std::size_t index) const {
  std::vector<std::int64_t> c(dim());
  for (std::size_t i = dim(); i-- > 0;) {
    const auto w = static_cast<std::size_t>(hi[i] - lo[i] + 1);
    c[i] = lo[i] + static_cast<std::int64_t>(index % w);
    index /= w;
  }
  return LatticePoint(std::move(c));
}

std::vector<LatticePoint> Box::points() const {
  std::vector<LatticePoint> out;
  const std::size_t n = size();
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(point(i));
  return out;
}

std::string Box::str() const { return lo.str() + ".." + hi.str(); }

Box hull_box(const std::vector<GridFunction>& fs, std::int64_t radius) {
  if (fs.empty()) throw std::invalid_argument("hull_box needs at least one function");
  const std::size_t d = fs.front().dim();
  std::vector<std::int64_t> lo(d, 0), hi(d, 0);
  bool any = false;
  for (const auto& f : fs) {
    if (f.dim() != d) throw std::invalid_argument("dimension mismatch among inputs");
    for (const auto& [x, v] : f.values()) {
      for (std::size_t i = 0; i < d; ++i) {
        lo[i] = any ? std::min(lo[i], x[i]) : x[i];
        hi[i] = any ? std::max(hi[i], x[i]) : x[i];
      }
      any = true;
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] -= radius;
    hi[i] += radius;
  }
  return {LatticePoint(lo), LatticePoint(hi)};
}

ValueField operator*(const ValueField& a, const ValueField& b) {
  if (!(a.box == b.box)) throw std::invalid_argument("value fields live on different boxes");
  ValueField out{a.box, {}};
  out.values.reserve(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) out.values.push_back(a.values[i] * b.values[i]);
  return out;
}

GridFunction ValueField::to_grid_function() const {
  GridFunction f(box.dim());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].is_zero()) continue;
    if (!values[i].is_rational()) throw std::invalid_argument("value field entry is not rational");
    f.set(box.point(i), values[i].exact().rational());
  }
  return f;
}

LpExponent LpExponent::parse(const std::string& text) {
  if (text == "inf" || text == "infinity") return infinity();
  Rational p = parse_rational(text);
  if (p <= 0) throw std::invalid_argument("norm exponent must be positive");
  return finite(p);
}

std::string LpExponent::str() const { return infinite ? "inf" : to_string(p); }

namespace {

Value norm_of(const std::vector<Value>& vals, const LpExponent& p) {
  if (p.infinite) {
    Value best;
    for (const auto& v : vals)
      if (compare(v, best) > 0) best = v;
    return best;
  }
  if (p.p <= 0) throw std::invalid_argument("norm exponent must be positive");
  const bool integral = p.p.get_den() == 1 && p.p.get_num().fits_slong_p();
  const bool rational = std::all_of(vals.begin(), vals.end(), [](const Value& v) { return v.is_rational(); });
  if (integral && rational) {
    const long n = p.p.get_num().get_si();
    Rational sum = 0;
    for (const auto& v : vals) sum += rational_pow(v.exact().rational(), n);
    if (sum == 0) return Value();
    return Value(PowerProduct(sum).pow(Rational(1) / p.p));
  }
  const Real e = to_real(p.p);
  Real sum = 0;
  for (const auto& v : vals) sum += std::pow(v.approx(), e);
  return Value::approximate(std::pow(sum, 1 / e));
}

}  // namespace

Value lp_norm(const GridFunction& f, const LpExponent& p) {
  std::vector<Value> vals;
  vals.reserve(f.support_size());
  for (const auto& [x, v] : f.values()) vals.emplace_back(PowerProduct(v));
  return norm_of(vals, p);
}

Value lp_norm(const ValueField& f, const LpExponent& p) { return norm_of(f.values, p); }

}  // namespace dmslice
