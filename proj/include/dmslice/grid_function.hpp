#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dmslice/arith.hpp"
#include "dmslice/lattice.hpp"
#include "dmslice/power_product.hpp"

namespace dmslice {

/// Finitely supported non-negative function Z^d -> Q.  Zero values are never
/// stored.
class GridFunction {
 public:
  explicit GridFunction(std::size_t dim = 1);

  static GridFunction delta(std::size_t dim);
  static GridFunction delta(const LatticePoint& at);

  std::size_t dim() const { return dim_; }
  bool empty() const { return values_.empty(); }
  std::size_t support_size() const { return values_.size(); }
  const std::map<LatticePoint, Rational>& values() const { return values_; }

  /// Setting 0 erases the point; negative values throw.
  void set(const LatticePoint& x, const Rational& v);
  Rational at(const LatticePoint& x) const;

  GridFunction translate(const LatticePoint& shift) const;
  GridFunction scale(const Rational& c) const;
  friend GridFunction operator+(const GridFunction& a, const GridFunction& b);

  /// One line per support point: "x1 ... xd num/den".
  std::string serialize() const;
  /// Rejects negative values, duplicate points and ragged dimensions.
  static GridFunction parse(const std::string& text);
  static GridFunction load(const std::string& path);
  void save(const std::string& path) const;

  friend bool operator==(const GridFunction&, const GridFunction&) = default;

 private:
  std::size_t dim_;
  std::map<LatticePoint, Rational> values_;
};

/// Axis-aligned box [lo, hi] in Z^d, iterated lexicographically.
struct Box {
  LatticePoint lo;
  LatticePoint hi;

  static Box cube(std::size_t dim, std::int64_t lo, std::int64_t hi);
  std::size_t dim() const { return lo.dim(); }
  std::size_t size() const;
  bool contains(const LatticePoint& x) const;
  /// Lexicographic rank of x (x must be inside).
  std::size_t index_of(const LatticePoint& x) const;
  LatticePoint point(std::size_t index) const;
  std::vector<LatticePoint> points() const;
  std::string str() const;

  friend bool operator==(const Box&, const Box&) = default;
};

/// Bounding box of the union of supports, widened by `radius` on every side.
Box hull_box(const std::vector<GridFunction>& fs, std::int64_t radius);

/// A function sampled on every point of a box.
struct ValueField {
  Box box;
  std::vector<Value> values;  // box order

  const Value& at(const LatticePoint& x) const { return values[box.index_of(x)]; }
  /// Pointwise product (same box).
  friend ValueField operator*(const ValueField& a, const ValueField& b);
  /// Non-zero exact rational entries as a GridFunction (throws otherwise).
  GridFunction to_grid_function() const;
};

/// Exponent of an l^p norm; p = infinity allowed.
struct LpExponent {
  Rational p{1};
  bool infinite = false;

  static LpExponent finite(const Rational& p) { return {p, false}; }
  static LpExponent infinity() { return {Rational(1), true}; }
  static LpExponent parse(const std::string& text);
  std::string str() const;
};

/// (sum |f|^p)^(1/p).  Exact when every value is rational and p is an integer
/// or infinity; otherwise a Real.
Value lp_norm(const GridFunction& f, const LpExponent& p);
Value lp_norm(const ValueField& f, const LpExponent& p);

}  // namespace dmslice
