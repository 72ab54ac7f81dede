#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmslice/grid_function.hpp"
#include "dmslice/operators.hpp"
#include "dmslice/surface.hpp"

namespace dmslice {

enum class SliceDepth {
  full,      // product of l linear maximal functions
  one_step,  // M_HL(f_slot) times the (l-1)-linear maximal function of the rest
};

struct SliceOptions {
  /// full: the slot carrying the level-set factor; one_step: the slot sliced
  /// off by M_HL.  Defaults to the last slot (full) or the first (one_step).
  std::optional<int> slot;
  SliceDepth depth = SliceDepth::full;
  std::optional<Box> box;
  /// Evaluate even when the preconditions fail (diagnostic use only).
  bool ignore_preconditions = false;
  bool keep_rows = false;
};

struct SlicedBound {
  ValueField field;
  std::string id;
};

/// Pointwise product of the linear maximal functions bounding T*(f_1..f_l):
///   ball          prod M_HL(f_i)
///   sphere        prod_{i != j} M_HL(f_i) * A*(f_j),  A* over eta in [0, L]
///   annulus       prod_{i != j} M_HL(f_i) * S*shift(f_j)
///   prime_sphere  prod_{i != j} M_HL^primes(f_i) * A*^primes(f_j),  eta in Gamma^j
/// with L the largest lambda.
SlicedBound slice_rhs(const SurfaceSpec& spec, const std::vector<GridFunction>& fs, const MaximalConfig& config,
                      const SliceOptions& options = {});

struct DominationRow {
  LatticePoint x;
  Value lhs;
  Value rhs;
  Difference diff;
};

struct DominationReport {
  enum class Verdict { dominated, violated, not_applicable };
  Verdict verdict = Verdict::not_applicable;
  std::string reason;  // why not applicable
  std::string lhs_id;
  std::string rhs_id;
  std::optional<Box> box;
  std::int64_t lambda_min = 0;
  std::int64_t lambda_max = 0;
  std::size_t points = 0;
  std::size_t violations = 0;
  Difference max_violation;  // max over the box of lhs - rhs
  std::optional<LatticePoint> witness;
  Value lhs_at_witness;
  Value rhs_at_witness;
  /// Relative tolerance used for Real values (0 in exact mode).
  Real tolerance = 0;
  std::vector<DominationRow> rows;

  static std::string csv_header();
  std::string csv_summary_row() const;
  std::string csv_rows() const;
  std::string str() const;
};

std::string to_string(DominationReport::Verdict v);

/// Checks T*(f_1..f_l)(x) <= slice_rhs(x) on the box.  The left side must use
/// the family's power-law normalization.  Spheres and prime spheres need
/// d >= k; prime families need the slot progressions to add up to the
/// ambient one.  Otherwise the verdict is not_applicable.
DominationReport verify_domination(const SurfaceSpec& spec, const std::vector<GridFunction>& fs,
                                   const MaximalConfig& config, const SliceOptions& options = {});

/// max over the box of S*(f, g) / (M_HL(g) * S*(f)) with the unshifted
/// annular maximal function (0/0 read as 0).  Bilinear annulus only.
Real annulus_literal_ratio(const SurfaceSpec& spec, const std::vector<GridFunction>& fs, const MaximalConfig& config,
                           const std::optional<Box>& box = std::nullopt);

}  // namespace dmslice
