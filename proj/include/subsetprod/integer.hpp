#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include "subsetprod/errors.hpp"

namespace subsetprod {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;
using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Conversions and printing

inline std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  u128 m = neg ? u128(-(v + 1)) + 1 : u128(v);
  std::string s;
  while (m) {
    s.push_back(char('0' + int(m % 10)));
    m /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

inline std::string to_string(const BigInt& v) { return v.str(); }

template <class Int>
Int from_big(const BigInt& v) {
  if constexpr (std::is_same_v<Int, BigInt>) {
    return v;
  } else if constexpr (std::is_same_v<Int, i128>) {
    BigInt m = boost::multiprecision::abs(v);
    u128 r = 0;
    for (int shift = 0; m != 0; shift += 64) {
      r |= u128(static_cast<u64>(m & 0xffffffffffffffffULL)) << shift;
      m >>= 64;
    }
    return v < 0 ? -i128(r) : i128(r);
  } else {
    return static_cast<Int>(v);
  }
}

template <class Int>
BigInt to_big(const Int& v) {
  if constexpr (std::is_same_v<Int, BigInt>) {
    return v;
  } else if constexpr (std::is_same_v<Int, i128>) {
    bool neg = v < 0;
    u128 m = neg ? u128(-(v + 1)) + 1 : u128(v);
    BigInt r = static_cast<u64>(m >> 64);
    r <<= 64;
    r += static_cast<u64>(m);
    return neg ? BigInt(-r) : r;
  } else {
    return BigInt(v);
  }
}

// Parses a signed decimal integer; throws UsageError on junk.
// Signed sum of terms, each a decimal integer or base^exp: "1048583",
// "2^20+7", "1-2^40", "-2^160+1".
inline BigInt parse_big(const std::string& text) {
  auto bad = [&] { return UsageError("expected an integer, got '" + text + "'"); };
  auto digits = [&](std::size_t& i) {
    const std::size_t start = i;
    BigInt v = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') v = v * 10 + (text[i++] - '0');
    if (i == start) throw bad();
    return v;
  };
  std::size_t i = 0;
  BigInt total = 0;
  bool first = true;
  while (first || i < text.size()) {
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
      neg = text[i++] == '-';
    } else if (!first) {
      throw bad();
    }
    BigInt term = digits(i);
    if (i < text.size() && text[i] == '^') {
      ++i;
      const BigInt e = digits(i);
      if (e > 100000) throw bad();
      term = boost::multiprecision::pow(term, e.convert_to<unsigned>());
    }
    total += neg ? BigInt(-term) : term;
    first = false;
  }
  return total;
}

inline unsigned bit_length(const BigInt& v) {
  return v == 0 ? 0u : unsigned(boost::multiprecision::msb(boost::multiprecision::abs(v))) + 1;
}

inline double log2_big(const BigInt& v) {
  unsigned bits = bit_length(v);
  if (bits <= 60) return std::log2(v.convert_to<double>());
  BigInt top = v >> (bits - 60);
  return std::log2(top.convert_to<double>()) + double(bits - 60);
}

// ---------------------------------------------------------------------------
// Generic signed helpers (work for i64, i128, BigInt)

template <class Int>
Int iabs(const Int& a) {
  return a < 0 ? Int(-a) : a;
}

// floor(a / b) for b > 0
template <class Int>
Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && (a < 0)) q -= 1;
  return q;
}

// a mod b in [0, b) for b > 0
template <class Int>
Int pos_mod(const Int& a, const Int& b) {
  Int r = a % b;
  if (r < 0) r += b;
  return r;
}

template <class Int>
Int gcd(Int a, Int b) {
  a = iabs(a);
  b = iabs(b);
  while (b != 0) {
    Int t = a % b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

template <class Int>
struct ExtGcd {
  Int g, x, y;  // g = x*a + y*b, g >= 0
};

template <class Int>
ExtGcd<Int> ext_gcd(const Int& a, const Int& b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = std::move(r);
    r = std::move(tmp);
    tmp = old_s - q * s;
    old_s = std::move(s);
    s = std::move(tmp);
    tmp = old_t - q * t;
    old_t = std::move(t);
    t = std::move(tmp);
  }
  if (old_r < 0) return {Int(-old_r), Int(-old_s), Int(-old_t)};
  return {old_r, old_s, old_t};
}

template <class Int>
Int isqrt(const Int& n) {
  if constexpr (std::is_same_v<Int, BigInt>) {
    return boost::multiprecision::sqrt(n);
  } else {
    if (n < 2) return n;
    Int x = Int(std::sqrt(double(n)));
    while (x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return x;
  }
}

// ---------------------------------------------------------------------------
// Modular arithmetic. Unsigned words for p < 2^64 go through 128-bit
// products; BigInt is reduced after each product.

inline u64 mul_mod(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }
inline BigInt mul_mod(const BigInt& a, const BigInt& b, const BigInt& m) { return a * b % m; }

inline u64 add_mod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return (s < a || s >= m) ? s - m : s;
}
inline BigInt add_mod(const BigInt& a, const BigInt& b, const BigInt& m) {
  BigInt s = a + b;
  if (s >= m) s -= m;
  return s;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }
inline BigInt sub_mod(const BigInt& a, const BigInt& b, const BigInt& m) {
  return a >= b ? BigInt(a - b) : BigInt(a + m - b);
}

template <class Word, class Exp>
Word pow_mod(Word base, Exp e, const Word& m) {
  Word result = Word(1) % m;
  base %= m;
  while (e > 0) {
    if ((e & 1) != 0) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return result;
}

// Inverse of a modulo m (gcd must be 1).
inline u64 inv_mod(u64 a, u64 m) {
  auto r = ext_gcd<i128>(i128(a % m), i128(m));
  if (r.g != 1) throw InternalError("inv_mod: element not invertible");
  return u64(pos_mod<i128>(r.x, i128(m)));
}
inline BigInt inv_mod(const BigInt& a, const BigInt& m) {
  auto r = ext_gcd<BigInt>(pos_mod<BigInt>(a, m), m);
  if (r.g != 1) throw InternalError("inv_mod: element not invertible");
  return pos_mod<BigInt>(r.x, m);
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // this base set is deterministic for all n < 2^64
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod<u64, u64>(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  if (bit_length(n) <= 64) return is_prime(static_cast<u64>(n));
  return boost::multiprecision::miller_rabin_test(n, 32);
}

// Euler criterion; p an odd prime. Returns 1, -1, or 0.
template <class Word>
int legendre(const Word& a, const Word& p) {
  Word r = pow_mod<Word, Word>(a % p, Word((p - 1) / 2), p);
  if (r == 0) return 0;
  return r == 1 ? 1 : -1;
}

// Tonelli-Shanks square root of a quadratic residue a modulo an odd prime p.
template <class Word>
Word sqrt_mod(const Word& a_in, const Word& p) {
  Word a = a_in % p;
  if (a == 0) return Word(0);
  if (legendre(a, p) != 1) throw InternalError("sqrt_mod: non-residue");
  if (p % 4 == 3) return pow_mod<Word, Word>(a, Word((p + 1) / 4), p);
  Word q = p - 1;
  unsigned s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  Word nonres = 2;
  while (legendre(nonres, p) != -1) nonres += 1;
  Word c = pow_mod<Word, Word>(nonres, q, p);
  Word x = pow_mod<Word, Word>(a, Word((q + 1) / 2), p);
  Word t = pow_mod<Word, Word>(a, q, p);
  unsigned m = s;
  while (t != 1) {
    unsigned i = 0;
    Word tt = t;
    while (tt != 1) {
      tt = mul_mod(tt, tt, p);
      ++i;
    }
    Word b = c;
    for (unsigned j = 0; j + 1 < m - i; ++j) b = mul_mod(b, b, p);
    x = mul_mod(x, b, p);
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    m = i;
  }
  return x;
}

// Kronecker symbol (D / l) for a prime l, D any integer.
template <class Int>
int kronecker_prime(const Int& D, u64 l) {
  if (l == 2) {
    if (D % 2 == 0) return 0;
    u64 r = u64(pos_mod<Int>(D, Int(8)));
    return (r == 1 || r == 7) ? 1 : -1;
  }
  u64 r = u64(pos_mod<Int>(D, Int(l)));
  return legendre<u64>(r, l);
}

inline u64 next_prime(u64 n) {
  while (!is_prime(n)) ++n;
  return n;
}

}  // namespace subsetprod
