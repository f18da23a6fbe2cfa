#include "mcascade/symbolic.hpp"

#include <cmath>

namespace mcascade {

namespace {

int digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
  return -1;
}

char digit_char(int v) {
  return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10);
}

}  // namespace

Word Word::parse(std::string_view digits, const Alphabet& a) {
  std::vector<std::uint8_t> syms;
  syms.reserve(digits.size());
  for (char c : digits) {
    const int v = digit_value(c);
    if (v < 0 || v >= a.size) {
      throw input_error(std::string("word: symbol '") + c + "' out of range for b=" +
                        std::to_string(a.size));
    }
    syms.push_back(static_cast<std::uint8_t>(v));
  }
  return Word(std::move(syms));
}

Word Word::prefix(int n) const {
  if (n < 0 || n > length()) throw input_error("word: prefix length out of range");
  return Word(std::vector<std::uint8_t>(syms_.begin(), syms_.begin() + n));
}

std::string Word::str() const {
  std::string out;
  out.reserve(syms_.size());
  for (std::uint8_t s : syms_) {
    if (s >= 36) throw input_error("word: symbol >= 36 has no digit rendering");
    out.push_back(digit_char(s));
  }
  return out;
}

Word child(const Word& u, int symbol, const Alphabet& a) {
  if (symbol < 0 || symbol >= a.size) {
    throw input_error("child: symbol " + std::to_string(symbol) +
                      " out of range for b=" + std::to_string(a.size));
  }
  std::vector<std::uint8_t> syms = u.symbols();
  syms.push_back(static_cast<std::uint8_t>(symbol));
  return Word(std::move(syms));
}

double ultrametric_distance(const Word& x, const Word& y) {
  if (x.length() != y.length() || x.length() < 1) {
    throw input_error("ultrametric_distance: needs equal nonzero lengths");
  }
  for (int i = 0; i < x.length(); ++i) {
    if (x[i] != y[i]) return std::exp(-static_cast<double>(i + 1));
  }
  return 0.0;  // identical prefixes: below resolution
}

}  // namespace mcascade
