#include "dmslice/progression.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

#include "dmslice/arith.hpp"

namespace dmslice {

Progression::Progression(std::int64_t a, std::int64_t m) : residue(a), modulus(m) {
  if (m < 1) throw std::invalid_argument("progression modulus must be positive");
  if (a < 0 || a >= m) throw std::invalid_argument("progression residue must satisfy 0 <= a < m");
}

Progression Progression::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string a_tok, mod_tok, m_tok, rest;
  if (!(in >> a_tok >> mod_tok >> m_tok) || (in >> rest) || mod_tok != "mod")
    throw std::invalid_argument("malformed progression '" + std::string(text) + "', expected 'a mod m'");
  auto to_int = [&](const std::string& t) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size()) throw std::invalid_argument("malformed progression '" + std::string(text) + "'");
    return static_cast<std::int64_t>(v);
  };
  std::int64_t a = to_int(a_tok);
  std::int64_t m = to_int(m_tok);
  if (m < 1) throw std::invalid_argument("progression modulus must be positive in '" + std::string(text) + "'");
  return {mod_floor(a, m), m};
}

bool Progression::contains(std::int64_t lambda) const { return mod_floor(lambda, modulus) == residue; }

std::string Progression::str() const { return std::to_string(residue) + " mod " + std::to_string(modulus); }

}  // namespace dmslice
