#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dmslice/arith.hpp"
#include "dmslice/lattice.hpp"
#include "dmslice/progression.hpp"

namespace dmslice {

enum class PrimeWeighting {
  logarithmic,  // weight prod_j log p_j
  unit,         // weight 1: the exact structural mode
};

namespace primes {

/// Primes <= n in ascending order; empty when n < 2.
std::vector<std::int64_t> sieve(std::int64_t n);

/// Constant-time primality lookup on [0, limit].
class PrimeLookup {
 public:
  explicit PrimeLookup(std::int64_t limit);
  bool is_prime(std::int64_t n) const {
    return n >= 0 && n <= limit_ && flags_[static_cast<std::size_t>(n)] != 0;
  }
  std::int64_t limit() const { return limit_; }

 private:
  std::int64_t limit_;
  std::vector<char> flags_;
};

struct WeightedPoint {
  LatticePoint point;  // every coordinate a positive prime
  Real weight;         // prod_j log p_j
};

/// Prime vectors (positive prime coordinates) with sum_j p_j^k = lambda,
/// lexicographic order.
std::vector<WeightedPoint> enumerate_prime_sphere(int d, int k, std::int64_t lambda);

/// P(lambda) for one factor: sum of weights over enumerate_prime_sphere.
Real weighted_count(int d, int k, std::int64_t lambda);

/// Per-mu totals over prime vectors of Z^d with sum_j p_j^k = mu <= max_lambda.
/// When `slot` is set, entries with mu outside the progression are zeroed.
struct PrimeSphereTable {
  std::vector<Real> weight;
  std::vector<BigInt> count;
};
PrimeSphereTable prime_sphere_table(int d, int k, std::int64_t max_lambda, PrimeWeighting weighting,
                                    const std::optional<Progression>& slot = std::nullopt);

bool progression_membership(std::int64_t lambda, const Progression& gamma);

struct SumsetResult {
  bool equal = false;
  std::int64_t modulus = 1;              // lcm of all moduli
  std::vector<std::int64_t> sumset;      // residues mod `modulus` reached by sum of the gammas
  std::optional<std::int64_t> witness;   // residue in the symmetric difference
  bool witness_in_sumset = false;        // true: reached but not ambient; false: ambient but unreached
};

/// Lifts every progression to M = lcm of all moduli and compares the sumset
/// of `gammas` with the lift of `ambient`.
SumsetResult sumset_check(std::span<const Progression> gammas, const Progression& ambient);

struct ParityRearrangementReport {
  enum class Status { verified, failure, vacuous };
  Status status = Status::vacuous;
  std::int64_t solutions = 0;               // ordered pairs (p, q) of prime vectors
  std::int64_t solutions_all_odd = 0;       // ... with every coordinate an odd prime
  std::int64_t halves_already_even = 0;
  std::int64_t halves_odd = 0;
  std::int64_t rearranged = 0;              // odd-half solutions with a verified even rearrangement
  // First odd-half solution and its rearrangement, or the failing solution.
  std::optional<std::pair<LatticePoint, LatticePoint>> example_before;
  std::optional<std::pair<LatticePoint, LatticePoint>> example_after;
  std::string summary() const;
};

/// Brute force over prime vectors p, q in Z^d with coordinates <= bound and
/// sum |p_j|^k + sum |q_j|^k = lambda.  Every solution whose two half-sums are
/// odd must admit a redistribution of the 2d coordinates into two halves with
/// even half-sums.  Requires d even, k odd, lambda even.
ParityRearrangementReport parity_rearrangement_check(int d, int k, std::int64_t lambda, std::int64_t coordinate_bound);

}  // namespace primes
}  // namespace dmslice
