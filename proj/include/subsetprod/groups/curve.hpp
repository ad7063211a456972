#pragma once

#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "subsetprod/group.hpp"

namespace subsetprod {

// E(F_p) for E: y^2 = x^3 + x + 1, affine chord-tangent law. Word is u64
// (p < 2^64, 128-bit products) or BigInt for larger fields.
template <class Word>
class CurveGroup {
 public:
  struct element_type {
    bool infinity = true;
    Word x = 0;
    Word y = 0;
    friend bool operator==(const element_type& a, const element_type& b) {
      if (a.infinity || b.infinity) return a.infinity == b.infinity;
      return a.x == b.x && a.y == b.y;
    }
  };
  static constexpr bool kAbelian = true;

  explicit CurveGroup(Word p, std::optional<BigInt> order = std::nullopt)
      : p_(std::move(p)), order_(std::move(order)), width_(byte_width(p_)) {
    if (p_ < 5 || !is_prime(p_)) throw UsageError("curve: p must be a prime >= 5");
    // discriminant -16(4 + 27) vanishes only for p = 31
    if (p_ == 31) throw UsageError("curve: y^2 = x^3 + x + 1 is singular mod 31");
  }

  const Word& prime() const { return p_; }

  // right-hand side x^3 + x + 1 mod p
  Word rhs(const Word& x) const {
    Word xx = mul_mod(x, x, p_);
    return add_mod(add_mod(mul_mod(xx, x, p_), x, p_), Word(1) % p_, p_);
  }

  bool on_curve(const element_type& P) const {
    if (P.infinity) return true;
    if (P.x >= p_ || P.y >= p_) return false;
    return mul_mod(P.y, P.y, p_) == rhs(P.x);
  }

  element_type make(Word x, Word y) const {
    element_type P{false, std::move(x), std::move(y)};
    if (!on_curve(P)) throw UsageError("curve: point not on curve");
    return P;
  }

  element_type identity() const { return {}; }

  element_type op(const element_type& P, const element_type& Q) const {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    Word lambda;
    if (P.x == Q.x) {
      if (P.y != Q.y || P.y == 0) return {};
      Word num = add_mod(mul_mod(Word(3), mul_mod(P.x, P.x, p_), p_), Word(1), p_);
      lambda = mul_mod(num, inv_mod(add_mod(P.y, P.y, p_), p_), p_);
    } else {
      lambda = mul_mod(sub_mod(Q.y, P.y, p_), inv_mod(sub_mod(Q.x, P.x, p_), p_), p_);
    }
    Word x3 = sub_mod(sub_mod(mul_mod(lambda, lambda, p_), P.x, p_), Q.x, p_);
    Word y3 = sub_mod(mul_mod(lambda, sub_mod(P.x, x3, p_), p_), P.y, p_);
    return {false, std::move(x3), std::move(y3)};
  }

  element_type inv(const element_type& P) const {
    if (P.infinity || P.y == 0) return P;
    return {false, P.x, Word(p_ - P.y)};
  }

  Encoding encode(const element_type& P) const {
    Encoding e;
    if (P.infinity) {
      for (std::size_t i = 0; i < 2 * width_; ++i) e.push(0xff);
    } else {
      e.append_le(P.x, width_);
      e.append_le(P.y, width_);
    }
    return e;
  }

  element_type decode(const Encoding& e) const {
    if (e.size() != 2 * width_) throw InputError("curve: encoding has wrong length");
    bool all_ones = true;
    for (std::size_t i = 0; i < e.size(); ++i) all_ones = all_ones && e[i] == 0xff;
    if (all_ones) return {};
    element_type P{false, read(e, 0), read(e, width_)};
    if (!on_curve(P)) throw InputError("curve: encoded point not on curve");
    return P;
  }

  // Uniform x until x^3+x+1 is a square (zero allowed), then a random root.
  element_type random_element(Rng& rng) const {
    for (;;) {
      Word x = uniform(rng);
      Word r = rhs(x);
      if (r == 0) return {false, x, Word(0)};
      if (legendre(r, p_) != 1) continue;
      Word y = sqrt_mod(r, p_);
      if (rng() & 1) y = p_ - y;
      return {false, std::move(x), std::move(y)};
    }
  }

  const std::optional<BigInt>& order() const { return order_; }

  std::string descriptor() const { return "curve:" + to_string(BigInt(p_)); }

  std::string format(const element_type& P) const {
    if (P.infinity) return "O";
    return "(" + to_string(BigInt(P.x)) + "," + to_string(BigInt(P.y)) + ")";
  }

 private:
  Word read(const Encoding& e, std::size_t off) const {
    if constexpr (std::is_same_v<Word, BigInt>) {
      return e.read_le_big(off, width_);
    } else {
      return e.read_le(off, width_);
    }
  }

  Word uniform(Rng& rng) const {
    if constexpr (std::is_same_v<Word, BigInt>) {
      BigInt v = 0;
      for (unsigned i = 0; i < bit_length(p_) / 64 + 2; ++i) v = (v << 64) | BigInt(rng());
      return v % p_;
    } else {
      return std::uniform_int_distribution<u64>(0, p_ - 1)(rng);
    }
  }

  Word p_;
  std::optional<BigInt> order_;
  std::size_t width_;
};

namespace detail {

// All m in [lo, hi] with m*P = O, by baby-step giant-step over x-coordinates.
inline std::vector<u64> annihilators_in_interval(const CurveGroup<u64>& E, const CurveGroup<u64>::element_type& P,
                                                 u64 lo, u64 hi) {
  using Pt = CurveGroup<u64>::element_type;
  const u64 width = hi - lo + 1;
  const u64 s = u64(isqrt<u64>(width)) + 1;
  auto multiples_of = [&](u64 ord) {
    std::vector<u64> out;
    for (u64 m = (lo + ord - 1) / ord * ord; m <= hi; m += ord) out.push_back(m);
    return out;
  };
  std::unordered_map<u64, u64> baby;  // x(jP) -> j, 1 <= j < s
  Pt jP = P;
  for (u64 j = 1; j < s; ++j) {
    if (jP.infinity) return multiples_of(j);
    auto [it, fresh] = baby.emplace(jP.x, j);
    if (!fresh) return multiples_of(j + it->second);  // jP = -j'P
    jP = E.op(jP, P);
  }
  const Pt stride = power(E, P, s);
  Pt Q = power(E, P, lo);
  std::set<u64> hits;
  auto consider = [&](i128 m) {
    if (m >= i128(lo) && m <= i128(hi) && power(E, P, u64(m)).infinity) hits.insert(u64(m));
  };
  for (u64 i = 0; i * s <= width + s; ++i) {
    i128 base = i128(lo) + i128(i) * s;
    if (Q.infinity) {
      consider(base);
    } else if (auto it = baby.find(Q.x); it != baby.end()) {
      consider(base - i128(it->second));
      consider(base + i128(it->second));
    }
    Q = E.op(Q, stride);
  }
  return {hits.begin(), hits.end()};
}

}  // namespace detail

// #E(F_p) for y^2 = x^3 + x + 1. Brute-force count below 2^16; above that,
// BSGS on random points inside the Hasse interval until the set of
// common annihilators has exactly one member.
inline u64 curve_order(u64 p, std::uint64_t seed = 1) {
  if (p < 5 || !is_prime(p)) throw UsageError("curve_order: p must be a prime >= 5");
  if (p == 31) throw UsageError("curve_order: curve is singular mod 31");
  if (p >= (u64(1) << 62)) throw CapabilityError("curve_order: p must be below 2^62");
  CurveGroup<u64> E(p);
  if (p < (1u << 16)) {
    u64 count = 1;
    for (u64 x = 0; x < p; ++x) {
      u64 r = E.rhs(x);
      count += r == 0 ? 1 : (legendre(r, p) == 1 ? 2 : 0);
    }
    return count;
  }
  const u64 root = isqrt<u64>(4 * p);  // floor(2 sqrt p)
  const u64 lo = p + 1 - root - 1;
  const u64 hi = p + 1 + root + 1;
  Rng rng(seed);
  std::vector<u64> candidates;
  for (int attempt = 0; attempt < 64; ++attempt) {
    auto P = E.random_element(rng);
    if (P.infinity) continue;
    auto hits = detail::annihilators_in_interval(E, P, lo, hi);
    if (attempt == 0 || candidates.empty()) {
      candidates = hits;
    } else {
      std::vector<u64> keep;
      std::set_intersection(candidates.begin(), candidates.end(), hits.begin(), hits.end(), std::back_inserter(keep));
      candidates = keep;
    }
    if (candidates.size() == 1) return candidates.front();
  }
  throw CapabilityError("curve_order: group exponent too small to isolate #E in the Hasse interval");
}

}  // namespace subsetprod
