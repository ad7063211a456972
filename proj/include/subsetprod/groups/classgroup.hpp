#pragma once

#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "subsetprod/group.hpp"

namespace subsetprod {

// Binary quadratic form a x^2 + b xy + c y^2.
template <class Int>
struct QuadForm {
  Int a = 1, b = 1, c = 1;
  friend bool operator==(const QuadForm& x, const QuadForm& y) { return x.a == y.a && x.b == y.b; }
};

template <class Int>
Int discriminant(const QuadForm<Int>& f) {
  return f.b * f.b - 4 * f.a * f.c;
}

template <class Int>
bool is_reduced(const QuadForm<Int>& f) {
  if (!(iabs(f.b) <= f.a && f.a <= f.c)) return false;
  if ((iabs(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
  return true;
}

namespace detail {

// b into (-a, a] by x -> x + r y
template <class Int>
void normalize(QuadForm<Int>& f) {
  if (-f.a < f.b && f.b <= f.a) return;
  Int two_a = 2 * f.a;
  Int r = floor_div<Int>(f.a - f.b, two_a);
  f.c = f.a * r * r + f.b * r + f.c;
  f.b = f.b + two_a * r;
}

}  // namespace detail

// Standard reduction of a positive definite form: normalize, then swap
// (a, b, c) -> (c, -b, a) while a > c.
template <class Int>
QuadForm<Int> reduce_form(QuadForm<Int> f) {
  if (discriminant(f) >= 0) throw UsageError("reduce_form: discriminant must be negative");
  if (f.a <= 0) throw UsageError("reduce_form: form must be positive definite (a > 0)");
  detail::normalize(f);
  while (f.a > f.c) {
    std::swap(f.a, f.c);
    f.b = -f.b;
    detail::normalize(f);
  }
  if (f.a == f.c && f.b < 0) f.b = -f.b;
  return f;
}

// Gauss composition (Cohen, Algorithm 5.4.7) followed by reduction.
template <class Int>
QuadForm<Int> compose_forms(const QuadForm<Int>& f1_in, const QuadForm<Int>& f2_in) {
  const QuadForm<Int>* f1 = &f1_in;
  const QuadForm<Int>* f2 = &f2_in;
  if (f1->a > f2->a) std::swap(f1, f2);
  const Int& a1 = f1->a;
  const Int& a2 = f2->a;
  Int s = (f1->b + f2->b) / 2;
  Int n = f2->b - s;

  Int y1, d;
  if (a2 % a1 == 0) {
    y1 = 0;
    d = a1;
  } else {
    auto eg = ext_gcd<Int>(a2, a1);
    y1 = eg.x;
    d = eg.g;
  }
  Int x2, y2, d1;
  if (s % d == 0) {
    y2 = -1;
    x2 = 0;
    d1 = d;
  } else {
    auto eg = ext_gcd<Int>(s, d);
    x2 = eg.x;
    y2 = -eg.y;
    d1 = eg.g;
  }
  Int v1 = a1 / d1;
  Int v2 = a2 / d1;
  Int r = pos_mod<Int>(pos_mod<Int>(y1 * y2, v1) * pos_mod<Int>(n, v1) - pos_mod<Int>(x2, v1) * pos_mod<Int>(f2->c, v1), v1);
  QuadForm<Int> f3;
  f3.b = f2->b + 2 * v2 * r;
  f3.a = v1 * v2;
  f3.c = (f2->c * d1 + r * (f2->b + v2 * r)) / v1;
  return reduce_form(f3);
}

template <class Int>
QuadForm<Int> principal_form(const Int& D) {
  if (pos_mod<Int>(D, Int(4)) == 0) return {Int(1), Int(0), Int(-D / 4)};
  return {Int(1), Int(1), Int((1 - D) / 4)};
}

template <class Int>
void check_discriminant(const Int& D) {
  if (D >= 0) throw UsageError("class group: discriminant must be negative");
  Int r = pos_mod<Int>(D, Int(4));
  if (r != 0 && r != 1) throw UsageError("class group: discriminant must be 0 or 1 mod 4");
}

// Form (l, b, (b^2 - D)/4l) for the invertible prime ideal of norm l, with
// b the least value in [0, 2l), b = D (mod 2), b^2 = D (mod 4l). nullopt when
// l is inert or the resulting form is imprimitive (l divides the conductor).
template <class Int>
std::optional<QuadForm<Int>> prime_form(u64 l, const Int& D) {
  check_discriminant(D);
  if (!is_prime(l)) throw UsageError("prime_form: l must be prime");
  const Int four_l = Int(4) * Int(l);
  const Int D_mod = pos_mod<Int>(D, four_l);
  const u64 parity = u64(pos_mod<Int>(D, Int(2)));
  std::optional<u64> found;
  if (l < (u64(1) << 16)) {
    for (u64 b = parity; b < 2 * l; b += 2) {
      if (pos_mod<Int>(Int(b) * Int(b) - D_mod, four_l) == 0) {
        found = b;
        break;
      }
    }
  } else {
    u64 dl = u64(pos_mod<Int>(D, Int(l)));
    if (legendre<u64>(dl, l) == -1) return std::nullopt;
    u64 root = sqrt_mod<u64>(dl, l);
    for (u64 b : {root, l - root, root + l, 2 * l - root}) {
      if (b < 2 * l && b % 2 == parity && (!found || b < *found)) found = b;
    }
  }
  if (!found) return std::nullopt;
  Int b = Int(*found);
  QuadForm<Int> f{Int(l), b, Int((b * b - D) / four_l)};
  if (gcd(gcd(f.a, f.b), f.c) != 1) return std::nullopt;
  return f;
}

// Ideal class group of the order of discriminant D as reduced primitive
// forms. Int is i128 for |D| < 2^60 and BigInt beyond that.
template <class Int>
class ClassGroup {
 public:
  using element_type = QuadForm<Int>;
  static constexpr bool kAbelian = true;

  explicit ClassGroup(Int D, std::optional<BigInt> h = std::nullopt) : D_(std::move(D)), h_(std::move(h)) {
    check_discriminant(D_);
    Int amax = isqrt<Int>(iabs(D_) / 3) + 1;
    width_ = byte_width(to_big(amax));
  }

  const Int& disc() const { return D_; }

  element_type identity() const { return principal_form(D_); }
  element_type op(const element_type& f, const element_type& g) const { return compose_forms(f, g); }
  element_type inv(const element_type& f) const { return reduce_form(element_type{f.a, Int(-f.b), f.c}); }

  element_type reduce(const element_type& f) const {
    if (discriminant(f) != D_) throw UsageError("class group: form has the wrong discriminant");
    return reduce_form(f);
  }

  // (a, b) only; c is recovered from D. b is stored zigzag so the sign survives.
  Encoding encode(const element_type& f) const {
    Encoding e;
    e.append_le(to_big(f.a), width_);
    BigInt b = to_big(f.b);
    e.append_le(b < 0 ? BigInt(-2 * b - 1) : BigInt(2 * b), width_ + 1);
    return e;
  }

  element_type decode(const Encoding& e) const {
    if (e.size() != 2 * width_ + 1) throw InputError("class group: encoding has wrong length");
    BigInt a = e.read_le_big(0, width_);
    BigInt zb = e.read_le_big(width_, width_ + 1);
    BigInt b = (zb & 1) != 0 ? BigInt(-(zb + 1) / 2) : BigInt(zb / 2);
    if (a <= 0) throw InputError("class group: a must be positive");
    BigInt num = b * b - to_big(D_);
    if (num % (4 * a) != 0) throw InputError("class group: (a, b) is not a form of this discriminant");
    element_type f{from_big<Int>(a), from_big<Int>(b), from_big<Int>(num / (4 * a))};
    if (!is_reduced(f)) throw InputError("class group: encoded form is not reduced");
    return f;
  }

  std::optional<element_type> prime(u64 l) const {
    auto f = prime_form<Int>(l, D_);
    if (!f) return std::nullopt;
    return reduce_form(*f);
  }

  // Power product of the first 16 admissible prime forms with exponents
  // uniform in [0, 2^(bits(|D|)/2 + 16)).
  element_type random_element(Rng& rng) const {
    element_type acc = identity();
    const unsigned ebits = bit_length(to_big(D_)) / 2 + 16;
    int used = 0;
    for (u64 l = 2; used < 16 && l < 100000; l = next_prime(l + 1)) {
      auto f = prime(l);
      if (!f) continue;
      ++used;
      BigInt e = 0;
      for (unsigned i = 0; i < ebits; i += 32) e = (e << 32) | BigInt(rng() & 0xffffffffu);
      e &= (BigInt(1) << ebits) - 1;
      acc = op(acc, power(*this, *f, e));
    }
    return acc;
  }

  const std::optional<BigInt>& order() const { return h_; }

  std::string descriptor() const { return "cl:" + to_string(to_big(D_)); }

  std::string format(const element_type& f) const {
    return "(" + to_string(to_big(f.a)) + "," + to_string(to_big(f.b)) + "," + to_string(to_big(f.c)) + ")";
  }

 private:
  Int D_;
  std::optional<BigInt> h_;
  std::size_t width_ = 1;
};

inline constexpr i64 kClassNumberBound = 100000000;

// Reduced primitive forms of discriminant D, by direct enumeration of
// |b| <= a <= sqrt(|D|/3).
inline std::vector<QuadForm<i64>> reduced_forms(i64 D) {
  check_discriminant<i64>(D);
  if (-D > kClassNumberBound) {
    throw CapabilityError("class_number: |D| = " + std::to_string(-D) +
                          " exceeds the enumeration bound 10^8; supply h externally");
  }
  std::vector<QuadForm<i64>> out;
  const i64 amax = isqrt<i64>(-D / 3);
  for (i64 a = 1; a <= amax; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      if (((b - D) & 1) != 0) continue;
      i64 num = b * b - D;
      if (num % (4 * a) != 0) continue;
      i64 c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      if (gcd(gcd(a, b), c) != 1) continue;
      out.push_back({a, b, c});
    }
  }
  return out;
}

inline i64 class_number(i64 D) { return i64(reduced_forms(D).size()); }

inline bool is_fundamental_discriminant(i64 D) {
  auto squarefree = [](i64 m) {
    m = iabs(m);
    for (i64 q = 2; q * q <= m; ++q) {
      if (m % (q * q) == 0) return false;
    }
    return true;
  };
  if (D >= 0) return false;
  i64 r = pos_mod<i64>(D, 4);
  if (r == 1) return squarefree(D);
  if (r != 0) return false;
  i64 m = D / 4;
  i64 rm = pos_mod<i64>(m, 4);
  return (rm == 2 || rm == 3) && squarefree(m);
}

}  // namespace subsetprod
