#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "subsetprod/errors.hpp"

namespace subsetprod {

// Fixed-capacity bit string; bit i is element i of the half/sequence.
template <std::size_t Words>
class BitString {
 public:
  static constexpr std::size_t kMaxBits = 64 * Words;

  BitString() = default;
  explicit BitString(std::size_t len) : len_(std::uint16_t(len)) {
    if (len > kMaxBits) throw CapabilityError("bit string longer than " + std::to_string(kMaxBits) + " bits");
  }

  std::size_t size() const { return len_; }

  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i, bool v = true) {
    if (v) {
      w_[i >> 6] |= std::uint64_t(1) << (i & 63);
    } else {
      w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63));
    }
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += std::size_t(std::popcount(w));
    return c;
  }
  bool none() const { return count() == 0; }

  // `width` (<= 64) bits starting at `pos`
  std::uint64_t extract(std::size_t pos, std::size_t width) const {
    std::size_t wi = pos >> 6, off = pos & 63;
    std::uint64_t v = w_[wi] >> off;
    if (off != 0 && off + width > 64 && wi + 1 < Words) v |= w_[wi + 1] << (64 - off);
    return width >= 64 ? v : v & ((std::uint64_t(1) << width) - 1);
  }

  // Fill from a word stream; bits past size() stay zero.
  template <class WordFn>
  void fill(WordFn&& next_word) {
    for (std::size_t i = 0; i < Words && 64 * i < len_; ++i) w_[i] = next_word();
    trim();
  }

  std::uint64_t word(std::size_t i) const { return w_[i]; }

  friend bool operator==(const BitString& a, const BitString& b) { return a.len_ == b.len_ && a.w_ == b.w_; }

  std::size_t hash() const {
    std::size_t h = len_;
    for (auto w : w_) h = h * 0x9e3779b97f4a7c15ULL ^ std::hash<std::uint64_t>{}(w);
    return h;
  }

 private:
  void trim() {
    for (std::size_t i = 0; i < Words; ++i) {
      std::size_t lo = 64 * i;
      if (lo >= len_) {
        w_[i] = 0;
      } else if (len_ - lo < 64) {
        w_[i] &= (std::uint64_t(1) << (len_ - lo)) - 1;
      }
    }
  }

  std::array<std::uint64_t, Words> w_{};
  std::uint16_t len_ = 0;
};

using MaskBits = BitString<4>;    // one half of S, up to 256 elements
using SubsetBits = BitString<8>;  // all of S, up to 512 elements

enum class Side : std::uint8_t { A, B };

inline char side_char(Side s) { return s == Side::A ? 'A' : 'B'; }

// A subsequence of one half of S. As a walk point it is an element of C:
// side A is x in P(A), side B stands for z*mu(y) with y given by the bits.
struct Mask {
  Side side = Side::A;
  MaskBits bits;
  friend bool operator==(const Mask&, const Mask&) = default;
};

using CPoint = Mask;

// "A{1,3}" with 1-based indices inside the half
inline std::string format_mask(const Mask& m) {
  std::string s(1, side_char(m.side));
  s += '{';
  bool first = true;
  for (std::size_t i = 0; i < m.bits.size(); ++i) {
    if (!m.bits.test(i)) continue;
    if (!first) s += ',';
    s += std::to_string(i + 1);
    first = false;
  }
  return s + '}';
}

// Parses "B:1,2,3,6" or "A{3,5}" (1-based indices) for a half of length `len`.
inline Mask parse_mask(std::string_view text, std::size_t len_a, std::size_t len_b) {
  if (text.empty() || (text[0] != 'A' && text[0] != 'B')) throw UsageError("mask must start with A or B");
  Mask m;
  m.side = text[0] == 'A' ? Side::A : Side::B;
  const std::size_t len = m.side == Side::A ? len_a : len_b;
  m.bits = MaskBits(len);
  std::size_t i = 1;
  while (i < text.size() && (text[i] == ':' || text[i] == '{' || text[i] == '}' || text[i] == ' ')) ++i;
  std::size_t value = 0;
  bool have = false;
  for (; i <= text.size(); ++i) {
    char c = i < text.size() ? text[i] : ',';
    if (c >= '0' && c <= '9') {
      value = value * 10 + std::size_t(c - '0');
      have = true;
    } else if (c == ',' || c == '}') {
      if (have) {
        if (value < 1 || value > len) throw UsageError("mask index " + std::to_string(value) + " out of range");
        m.bits.set(value - 1);
      }
      value = 0;
      have = false;
    } else if (c != ' ') {
      throw UsageError(std::string("unexpected character '") + c + "' in mask");
    }
  }
  return m;
}

}  // namespace subsetprod

template <std::size_t W>
struct std::hash<subsetprod::BitString<W>> {
  std::size_t operator()(const subsetprod::BitString<W>& b) const noexcept { return b.hash(); }
};
