#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "dmslice/arith.hpp"
#include "dmslice/power_product.hpp"

namespace dmslice {

/// A point of Z^d.
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}
  LatticePoint(std::initializer_list<std::int64_t> coords) : coords_(coords) {}

  static LatticePoint origin(std::size_t dim) { return LatticePoint(std::vector<std::int64_t>(dim, 0)); }

  std::size_t dim() const { return coords_.size(); }
  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  std::int64_t& operator[](std::size_t i) { return coords_[i]; }
  std::span<const std::int64_t> coords() const { return coords_; }

  LatticePoint operator+(const LatticePoint& o) const;
  LatticePoint operator-(const LatticePoint& o) const;

  std::string str() const;

  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;

 private:
  std::vector<std::int64_t> coords_;
};

/// Sum_j |u_j|^k (odd k uses |u_j|^k).  Overflow-checked.
std::int64_t power_norm(std::span<const std::int64_t> u, unsigned k);
inline std::int64_t power_norm(const LatticePoint& u, unsigned k) { return power_norm(u.coords(), k); }

namespace lattice {

/// {u in Z^d : sum_j |u_j|^k = lambda}, lexicographic order.
std::vector<LatticePoint> enumerate_sphere(int d, int k, std::int64_t lambda);

/// {u in Z^d : sum_j |u_j|^k <= lambda}, lexicographic order.
std::vector<LatticePoint> enumerate_ball(int d, int k, std::int64_t lambda);

/// counts[mu] = #{u in Z^d : sum_j |u_j|^k = mu} for 0 <= mu <= max_lambda.
std::vector<BigInt> sphere_count_table(int d, int k, std::int64_t max_lambda);

BigInt count_sphere(int d, int k, std::int64_t lambda);
BigInt count_ball(int d, int k, std::int64_t lambda);

/// Largest integer t >= 0 with t < multiplier * lambda^theta (lambda >= 1).
/// A point with |x|^2 = s lies in the annulus iff 0 <= lambda - s <= slack.
std::int64_t annulus_slack(std::int64_t lambda, const Rational& theta, const Rational& multiplier);

/// Exact membership  lambda - multiplier*lambda^theta < norm2 <= lambda.
bool in_annulus(std::int64_t norm2, std::int64_t lambda, const Rational& theta, const Rational& multiplier);

/// Lattice points of Z^d with lambda - w*lambda^theta < |x|^2 <= lambda.
std::vector<LatticePoint> enumerate_annulus(int d, const Rational& theta, std::int64_t lambda,
                                            const Rational& width_multiplier);

BigInt count_annulus(int d, const Rational& theta, std::int64_t lambda, const Rational& width_multiplier);

}  // namespace lattice
}  // namespace dmslice
