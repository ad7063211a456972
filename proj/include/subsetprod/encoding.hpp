#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "subsetprod/errors.hpp"
#include "subsetprod/integer.hpp"

namespace subsetprod {

// Canonical byte encoding of a group element. Fixed capacity so encodings
// can be hashed and compared without heap traffic on the walk's hot path.
class Encoding {
 public:
  static constexpr std::size_t kCapacity = 64;

  Encoding() = default;

  std::size_t size() const { return size_; }
  const std::uint8_t* data() const { return bytes_.data(); }
  std::uint8_t operator[](std::size_t i) const { return bytes_[i]; }

  void push(std::uint8_t b) {
    if (size_ == kCapacity) throw CapabilityError("encoding exceeds 64 bytes");
    bytes_[size_++] = b;
  }

  // little-endian, exactly `width` bytes
  void append_le(u64 v, std::size_t width) {
    for (std::size_t i = 0; i < width; ++i) {
      push(std::uint8_t(v & 0xff));
      v = i < 7 ? v >> 8 : 0;
    }
  }

  void append_le(const BigInt& v, std::size_t width) {
    BigInt m = v;
    for (std::size_t i = 0; i < width; ++i) {
      push(static_cast<std::uint8_t>(static_cast<unsigned>(m & 0xff)));
      m >>= 8;
    }
  }

  u64 read_le(std::size_t offset, std::size_t width) const {
    u64 v = 0;
    for (std::size_t i = 0; i < width && i < 8; ++i) v |= u64(bytes_[offset + i]) << (8 * i);
    return v;
  }

  BigInt read_le_big(std::size_t offset, std::size_t width) const {
    BigInt v = 0;
    for (std::size_t i = width; i-- > 0;) v = (v << 8) | unsigned(bytes_[offset + i]);
    return v;
  }

  std::string_view view() const { return {reinterpret_cast<const char*>(bytes_.data()), size_}; }

  std::string hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    s.reserve(2 * size_);
    for (std::size_t i = 0; i < size_; ++i) {
      s.push_back(kDigits[bytes_[i] >> 4]);
      s.push_back(kDigits[bytes_[i] & 15]);
    }
    return s;
  }

  static Encoding from_hex(std::string_view text) {
    if (text.size() % 2 != 0) throw InputError("odd-length hex encoding");
    Encoding e;
    for (std::size_t i = 0; i < text.size(); i += 2) {
      e.push(std::uint8_t(nibble(text[i]) << 4 | nibble(text[i + 1])));
    }
    return e;
  }

  friend bool operator==(const Encoding& x, const Encoding& y) { return x.view() == y.view(); }

 private:
  static unsigned nibble(char c) {
    if (c >= '0' && c <= '9') return unsigned(c - '0');
    if (c >= 'a' && c <= 'f') return unsigned(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return unsigned(c - 'A' + 10);
    throw InputError(std::string("bad hex digit '") + c + "'");
  }

  std::array<std::uint8_t, kCapacity> bytes_{};
  std::size_t size_ = 0;
};

inline std::size_t byte_width(const BigInt& max_value) {
  return std::max<std::size_t>(1, (bit_length(max_value) + 7) / 8);
}

inline std::size_t byte_width(u64 max_value) {
  return std::max<std::size_t>(1, (std::bit_width(max_value) + 7) / 8);
}

}  // namespace subsetprod

template <>
struct std::hash<subsetprod::Encoding> {
  std::size_t operator()(const subsetprod::Encoding& e) const noexcept {
    return std::hash<std::string_view>{}(e.view());
  }
};
