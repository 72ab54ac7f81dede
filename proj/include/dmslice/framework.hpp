#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dmslice/arith.hpp"
#include "dmslice/progression.hpp"
#include "dmslice/surface.hpp"

namespace dmslice {

using ComponentFn = std::function<std::int64_t(std::span<const std::int64_t>)>;
using SurfaceFn = std::function<std::int64_t(std::span<const std::int64_t>, std::span<const std::int64_t>)>;
using PhiFn = std::function<Rational(int)>;

/// A bilinear surface {(u, v) : h(u, v) = lambda} (or <= lambda, or inside an
/// annulus window) described for the framework checker.
struct FrameworkSurface {
  enum class Shape { level, ball, annulus };

  std::string name;
  Shape shape = Shape::level;
  int k = 2;
  std::array<int, 2> dims{1, 1};
  SurfaceFn h;
  /// Declared additive pieces h_1, h_2; empty when none are declared.
  std::vector<ComponentFn> components;
  std::array<bool, 2> prime_slots{false, false};
  /// Allowable classes for eta_1 = h_1(u), eta_2 = h_2(v), and for lambda.
  std::array<Progression, 2> slot_sets{Progression::all(), Progression::all()};
  std::array<std::int64_t, 2> slot_min{0, 0};
  Progression ambient = Progression::all();
  std::int64_t onset = 1;
  std::optional<Rational> theta;  // annulus shape
  PhiFn phi;
  std::int64_t suggested_lambda_max = 100;
};

/// Bilinear surface of a registered family (l = 1 is promoted with h_1 = h_2,
/// l > 2 pairs one factor with the remaining l - 1).
FrameworkSurface framework_surface(const SurfaceSpec& spec, std::int64_t onset = 1);

/// h(u, v) = |u|^2 |v|^2 with no additive decomposition.
FrameworkSurface multiplicative_surface(int d);

struct ConditionResult {
  bool pass = false;
  std::string witness;
  std::string detail;
};

struct FrameworkReport {
  std::string surface;
  std::array<ConditionResult, 5> conditions;
  std::vector<std::int64_t> holes_below_onset;
  std::int64_t onset = 1;
  std::int64_t lambda_max = 0;
  bool overall = false;
  std::string str() const;
};

struct FrameworkProbe {
  std::int64_t lambda_max = 100;
  /// Radius of the exhaustive additivity box; chosen from the dimension when 0.
  std::int64_t additivity_radius = 0;
  int max_dimension = 32;  // condition 1 checks 1..max_dimension
};

FrameworkReport check_framework(const FrameworkSurface& surface, const FrameworkProbe& probe);

/// The four families of the bilinear theory with their declared onsets.
std::vector<FrameworkSurface> framework_presets();

}  // namespace dmslice
