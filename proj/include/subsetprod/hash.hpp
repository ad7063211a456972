#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <random>
#include <vector>

#include <sodium.h>

#include "subsetprod/encoding.hpp"

namespace subsetprod {

using Key128 = std::array<std::uint64_t, 2>;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic seed derivation: child seed for (parent, a, b).
inline constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(parent) ^ a) ^ (b * 0xd1342543de82ef95ULL));
}

inline Key128 derive_key(std::uint64_t parent, std::uint64_t a, std::uint64_t b = 0) {
  return {derive_seed(parent, a, 2 * b), derive_seed(parent, a, 2 * b + 1)};
}

using Rng = std::mt19937_64;

// SipHash-2-4 via libsodium. A nonzero tweak is hashed as an 8-byte
// little-endian prefix of the message.
class SipHash {
 public:
  static std::uint64_t hash(const Key128& key, const std::uint8_t* data, std::size_t len, std::uint64_t tweak = 0) {
    unsigned char k[crypto_shorthash_siphash24_KEYBYTES];
    for (int i = 0; i < 16; ++i) k[i] = static_cast<unsigned char>(key[i / 8] >> (8 * (i % 8)));
    unsigned char out[crypto_shorthash_siphash24_BYTES];
    if (tweak == 0) {
      crypto_shorthash_siphash24(out, data, len, k);
    } else {
      unsigned char small[8 + Encoding::kCapacity];
      std::vector<unsigned char> large;
      unsigned char* msg = small;
      if (len > Encoding::kCapacity) {
        large.resize(8 + len);
        msg = large.data();
      }
      for (int i = 0; i < 8; ++i) msg[i] = static_cast<unsigned char>(tweak >> (8 * i));
      if (len) std::memcpy(msg + 8, data, len);
      crypto_shorthash_siphash24(out, msg, 8 + len, k);
    }
    std::uint64_t h = 0;
    for (int i = 7; i >= 0; --i) h = (h << 8) | out[i];
    return h;
  }

  static std::uint64_t hash(const Key128& key, const Encoding& e, std::uint64_t tweak = 0) {
    return hash(key, e.data(), e.size(), tweak);
  }
};

// Counter-mode expansion of a keyed PRF over an encoding: word i is
// SipHash(key, encoding) with the block counter folded into the tweak.
class KeyedStream {
 public:
  KeyedStream(const Key128& key, const Encoding& e) : key_(key), enc_(e) {}

  std::uint64_t word(std::size_t i) const { return SipHash::hash(key_, enc_, std::uint64_t(i) + 1); }

 private:
  const Key128& key_;
  const Encoding& enc_;
};

}  // namespace subsetprod
