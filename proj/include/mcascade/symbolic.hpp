#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mcascade/errors.hpp"

namespace mcascade {

/// Alphabet Λ = {0, …, b−1} of a one-sided symbolic space.
struct Alphabet {
  int size = 2;

  Alphabet() = default;
  explicit Alphabet(int b) : size(b) {
    if (b < 2) throw input_error("alphabet: need b >= 2, got " + std::to_string(b));
    if (b > 256) throw input_error("alphabet: b > 256 unsupported");
  }

  bool operator==(const Alphabet&) const = default;
};

/// Finite word over Λ. A word of length n addresses the cylinder of all
/// infinite sequences sharing this prefix; the empty word is the whole space.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<std::uint8_t> symbols) : syms_(std::move(symbols)) {}

  /// Parses a base-b digit string (0-9 then a-z, so b <= 36).
  static Word parse(std::string_view digits, const Alphabet& a);

  int length() const { return static_cast<int>(syms_.size()); }
  bool empty() const { return syms_.empty(); }
  std::uint8_t operator[](int i) const { return syms_[static_cast<std::size_t>(i)]; }

  Word prefix(int n) const;

  /// Base-b digit rendering; requires every symbol < 36.
  std::string str() const;

  const std::vector<std::uint8_t>& symbols() const { return syms_; }
  bool operator==(const Word&) const = default;

 private:
  std::vector<std::uint8_t> syms_;
};

/// u·j, the j-th child of u. Throws input_error when j is not in Λ.
Word child(const Word& u, int symbol, const Alphabet& a);

/// Standard ultrametric e^{-k} where k is the first (1-based) index of
/// disagreement between two equal-length prefixes; 0 when they coincide.
double ultrametric_distance(const Word& x, const Word& y);

}  // namespace mcascade
