#pragma once

#include <array>
#include <optional>
#include <string>

#include "subsetprod/group.hpp"

namespace subsetprod {

// GL2(F_p): invertible 2x2 matrices, entries row-major [a b; c d].
class GL2Group {
 public:
  struct element_type {
    std::array<u64, 4> m{1, 0, 0, 1};
    friend bool operator==(const element_type&, const element_type&) = default;
  };
  static constexpr bool kAbelian = false;

  explicit GL2Group(u64 p) : p_(p), width_(byte_width(p - 1)) {
    if (!is_prime(p)) throw UsageError("gl2: p must be prime");
  }

  u64 prime() const { return p_; }

  u64 det(const element_type& x) const {
    return sub_mod(mul_mod(x.m[0], x.m[3], p_), mul_mod(x.m[1], x.m[2], p_), p_);
  }

  element_type make(u64 a, u64 b, u64 c, u64 d) const {
    element_type x{{a % p_, b % p_, c % p_, d % p_}};
    if (det(x) == 0) throw UsageError("gl2: singular matrix");
    return x;
  }

  element_type identity() const { return {}; }

  element_type op(const element_type& x, const element_type& y) const {
    const auto& a = x.m;
    const auto& b = y.m;
    auto dot = [&](u64 u0, u64 v0, u64 u1, u64 v1) { return add_mod(mul_mod(u0, v0, p_), mul_mod(u1, v1, p_), p_); };
    return {{dot(a[0], b[0], a[1], b[2]), dot(a[0], b[1], a[1], b[3]), dot(a[2], b[0], a[3], b[2]),
             dot(a[2], b[1], a[3], b[3])}};
  }

  element_type inv(const element_type& x) const {
    u64 di = inv_mod(det(x), p_);
    auto neg = [&](u64 v) { return v == 0 ? 0 : p_ - v; };
    return {{mul_mod(x.m[3], di, p_), mul_mod(neg(x.m[1]), di, p_), mul_mod(neg(x.m[2]), di, p_),
             mul_mod(x.m[0], di, p_)}};
  }

  Encoding encode(const element_type& x) const {
    Encoding e;
    for (u64 v : x.m) e.append_le(v, width_);
    return e;
  }

  element_type decode(const Encoding& e) const {
    if (e.size() != 4 * width_) throw InputError("gl2: encoding has wrong length");
    element_type x;
    for (std::size_t i = 0; i < 4; ++i) {
      x.m[i] = e.read_le(i * width_, width_);
      if (x.m[i] >= p_) throw InputError("gl2: entry out of range");
    }
    if (det(x) == 0) throw InputError("gl2: singular matrix");
    return x;
  }

  // Rejection sampling: uniform entries until the determinant is nonzero.
  element_type random_element(Rng& rng) const {
    std::uniform_int_distribution<u64> entry(0, p_ - 1);
    for (;;) {
      element_type x{{entry(rng), entry(rng), entry(rng), entry(rng)}};
      if (det(x) != 0) return x;
    }
  }

  std::optional<BigInt> order() const { return gl2_order(p_); }

  std::string descriptor() const { return "gl2:" + std::to_string(p_); }

  std::string format(const element_type& x) const {
    return "[" + std::to_string(x.m[0]) + " " + std::to_string(x.m[1]) + "; " + std::to_string(x.m[2]) + " " +
           std::to_string(x.m[3]) + "]";
  }

  // (p^2 - 1)(p^2 - p)
  static BigInt gl2_order(u64 p) {
    BigInt q = p;
    return (q * q - 1) * (q * q - q);
  }

 private:
  u64 p_;
  std::size_t width_;
};

inline BigInt gl2_order(u64 p) { return GL2Group::gl2_order(p); }

}  // namespace subsetprod
