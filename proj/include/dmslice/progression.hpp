#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dmslice {

/// Residue class  a mod m  with 0 <= a < m.
struct Progression {
  std::int64_t residue = 0;
  std::int64_t modulus = 1;

  Progression() = default;
  Progression(std::int64_t a, std::int64_t m);

  static Progression all() { return {0, 1}; }
  /// Parses "a mod m" (whitespace tolerant).  Throws std::invalid_argument.
  static Progression parse(std::string_view text);

  bool contains(std::int64_t lambda) const;
  std::string str() const;

  friend bool operator==(const Progression&, const Progression&) = default;
};

}  // namespace dmslice
