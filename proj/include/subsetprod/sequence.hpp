#pragma once

#include <cmath>
#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subsetprod/bits.hpp"
#include "subsetprod/descriptor.hpp"
#include "subsetprod/group.hpp"

namespace subsetprod {

enum class SequenceKind { CurvePoints, ClassPrimes, Random, Explicit };
enum class TargetKind { NextGenerator, Explicit, Random };

inline const char* to_string(SequenceKind k) {
  switch (k) {
    case SequenceKind::CurvePoints: return "curve-points";
    case SequenceKind::ClassPrimes: return "class-primes";
    case SequenceKind::Random: return "random";
    case SequenceKind::Explicit: return "explicit";
  }
  return "?";
}

// S = AB with #A = ceil(k/2) unless overridden. Inverses of the B half are
// cached so that z*mu(y) costs one group operation per selected element.
template <FiniteGroup G>
class Sequence {
 public:
  using E = Element<G>;

  Sequence(G group, std::vector<E> elems, SequenceKind kind = SequenceKind::Explicit,
           std::vector<std::string> labels = {}, std::optional<std::size_t> split = std::nullopt)
      : group_(std::move(group)), elems_(std::move(elems)), kind_(kind), labels_(std::move(labels)) {
    if (elems_.size() < 2) throw UsageError("sequence needs k >= 2");
    if (elems_.size() > 2 * MaskBits::kMaxBits) throw CapabilityError("sequence longer than 512 elements");
    set_split(split.value_or((elems_.size() + 1) / 2));
  }

  // Same elements, #A = a_len.
  Sequence with_split(std::size_t a_len) const {
    Sequence s = *this;
    s.set_split(a_len);
    return s;
  }

  const G& group() const { return group_; }
  std::size_t k() const { return elems_.size(); }
  std::size_t size_a() const { return split_; }
  std::size_t size_b() const { return elems_.size() - split_; }
  std::size_t half_size(Side s) const { return s == Side::A ? size_a() : size_b(); }

  const std::vector<E>& elements() const { return elems_; }
  const E& a(std::size_t i) const { return elems_[i]; }
  const E& b(std::size_t i) const { return elems_[split_ + i]; }
  const E& b_inv(std::size_t i) const { return b_inv_[i]; }
  SequenceKind kind() const { return kind_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<double> density() const {
    auto n = group_.order();
    if (!n || *n < 2) return std::nullopt;
    return double(k()) / log2_big(*n);
  }

 private:
  void set_split(std::size_t a_len) {
    if (a_len < 1 || a_len >= elems_.size()) throw UsageError("split must leave both halves non-empty");
    if (a_len > MaskBits::kMaxBits || elems_.size() - a_len > MaskBits::kMaxBits) {
      throw CapabilityError("sequence half longer than 256 elements");
    }
    split_ = a_len;
    b_inv_.clear();
    for (std::size_t i = split_; i < elems_.size(); ++i) b_inv_.push_back(group_.inv(elems_[i]));
  }

  G group_;
  std::vector<E> elems_;
  std::vector<E> b_inv_;
  std::size_t split_ = 1;
  SequenceKind kind_;
  std::vector<std::string> labels_;
};

template <FiniteGroup G>
struct TargetSpec {
  Element<G> z;
  TargetKind kind = TargetKind::Explicit;
};

template <FiniteGroup G>
struct Instance {
  Sequence<G> seq;
  TargetSpec<G> target;
};

// ---------------------------------------------------------------------------
// Builders

// P_i = (x_i, y_i) with x_i the i-th smallest positive x for which x^3+x+1 is
// a nonzero square mod p, y_i <= (p-1)/2; target P_{k+1}.
template <class Word>
Instance<CurveGroup<Word>> build_curve_sequence(const CurveGroup<Word>& E, std::size_t k) {
  if (k < 2) throw UsageError("curve sequence needs k >= 2");
  using Pt = typename CurveGroup<Word>::element_type;
  const Word& p = E.prime();
  const Word half = (p - 1) / 2;
  std::vector<Pt> pts;
  std::vector<std::string> labels;
  for (Word x = 1; pts.size() < k + 1; x += 1) {
    if (x >= p) throw InputError("curve sequence: fewer than k+1 residue x-values below p");
    Word r = E.rhs(x);
    if (r == 0 || legendre(r, p) != 1) continue;
    Word y = sqrt_mod(r, p);
    if (y > half) y = p - y;
    pts.push_back(Pt{false, x, y});
    labels.push_back(to_string(BigInt(x)));
  }
  Pt z = pts.back();
  pts.pop_back();
  labels.pop_back();
  return {Sequence<CurveGroup<Word>>(E, std::move(pts), SequenceKind::CurvePoints, std::move(labels)),
          {z, TargetKind::NextGenerator}};
}

enum class PrimeOrder { Ascending, Reversed };

// S_k = ([alpha_1], ..., [alpha_k]) over the admissible primes in ascending
// order; target [alpha_{k+1}]. Labels carry the norms l_i. `Reversed` keeps
// the same k primes but lists them largest first.
template <class Int>
Instance<ClassGroup<Int>> build_class_sequence(const ClassGroup<Int>& G, std::size_t k,
                                               PrimeOrder order = PrimeOrder::Ascending) {
  if (k < 2) throw UsageError("class sequence needs k >= 2");
  std::vector<QuadForm<Int>> forms;
  std::vector<std::string> labels;
  for (u64 l = 2; forms.size() < k + 1; l = next_prime(l + 1)) {
    auto f = G.prime(l);
    if (!f) continue;
    forms.push_back(*f);
    labels.push_back(std::to_string(l));
  }
  auto z = forms.back();
  forms.pop_back();
  labels.pop_back();
  if (order == PrimeOrder::Reversed) {
    std::reverse(forms.begin(), forms.end());
    std::reverse(labels.begin(), labels.end());
  }
  return {Sequence<ClassGroup<Int>>(G, std::move(forms), SequenceKind::ClassPrimes, std::move(labels)),
          {z, TargetKind::NextGenerator}};
}

// k independent samples then a random target, all from one seeded stream.
template <FiniteGroup G>
Instance<G> build_random_sequence(const G& group, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Element<G>> elems;
  for (std::size_t i = 0; i < k; ++i) elems.push_back(group.random_element(rng));
  auto z = group.random_element(rng);
  return {Sequence<G>(group, std::move(elems), SequenceKind::Random), {z, TargetKind::Random}};
}

// Z/127Z with A = (3^i), B = (5^i), i = 1..6 and z = 2.
inline Instance<ZnGroup> build_toy_instance() {
  ZnGroup G(127);
  std::vector<ZnGroup::element_type> elems;
  for (u64 base : {3u, 5u}) {
    u64 v = 1;
    for (int i = 1; i <= 6; ++i) {
      v = v * base % 127;
      elems.push_back(G.make(v));
    }
  }
  return {Sequence<ZnGroup>(G, std::move(elems), SequenceKind::Explicit), {G.make(2), TargetKind::Explicit}};
}

// ---------------------------------------------------------------------------
// Products

inline MaskBits empty_bits(std::size_t len) { return MaskBits(len); }

template <FiniteGroup G>
void check_mask(const Sequence<G>& seq, const Mask& m) {
  if (m.bits.size() != seq.half_size(m.side)) throw UsageError("mask length does not match its half of S");
}

// pi: left-to-right ordered product of the selected elements of one half.
// For side B this is the plain pi(y).
template <FiniteGroup G>
Element<G> product(const Sequence<G>& seq, const Mask& m) {
  check_mask(seq, m);
  const auto& group = seq.group();
  auto acc = group.identity();
  for (std::size_t i = 0; i < m.bits.size(); ++i) {
    if (m.bits.test(i)) acc = group.op(acc, m.side == Side::A ? seq.a(i) : seq.b(i));
  }
  return acc;
}

// pi(z mu(y)) = z * y_m^{-1} * ... * y_1^{-1}
template <FiniteGroup G>
Element<G> mu_product(const Sequence<G>& seq, const Mask& m, const Element<G>& z) {
  check_mask(seq, m);
  if (m.side != Side::B) throw UsageError("mu_product takes a B-side mask");
  const auto& group = seq.group();
  auto acc = z;
  for (std::size_t i = m.bits.size(); i-- > 0;) {
    if (m.bits.test(i)) acc = group.op(acc, seq.b_inv(i));
  }
  return acc;
}

// Product of the subsequence of S selected by a k-bit indicator.
template <FiniteGroup G>
Element<G> subset_product(const Sequence<G>& seq, const SubsetBits& sel) {
  if (sel.size() != seq.k()) throw UsageError("subset descriptor length does not match k");
  const auto& group = seq.group();
  auto acc = group.identity();
  for (std::size_t i = 0; i < seq.k(); ++i) {
    if (sel.test(i)) acc = group.op(acc, seq.elements()[i]);
  }
  return acc;
}

// xy as a k-bit indicator over S; re-verified against z before returning.
template <FiniteGroup G>
SubsetBits assemble_answer(const Sequence<G>& seq, const Mask& x, const Mask& y, const Element<G>& z) {
  check_mask(seq, x);
  check_mask(seq, y);
  if (x.side != Side::A || y.side != Side::B) throw UsageError("assemble_answer takes an A mask and a B mask");
  SubsetBits sel(seq.k());
  for (std::size_t i = 0; i < seq.size_a(); ++i) sel.set(i, x.bits.test(i));
  for (std::size_t i = 0; i < seq.size_b(); ++i) sel.set(seq.size_a() + i, y.bits.test(i));
  if (!(subset_product(seq, sel) == z)) throw InternalError("assembled subsequence does not multiply to z");
  return sel;
}

// ---------------------------------------------------------------------------
// Subset descriptor text form: lowercase hex of the k-bit indicator, padded
// to whole nibbles. Msb: bit j counted from the most significant bit of the
// string is S_{j+1}. Lsb: bit j counted from the least significant bit.

enum class BitOrder { Msb, Lsb };

inline std::string to_hex(const SubsetBits& sel, BitOrder order = BitOrder::Msb) {
  const std::size_t k = sel.size();
  const std::size_t nibbles = (k + 3) / 4;
  std::string out(nibbles, '0');
  static constexpr char kDigits[] = "0123456789abcdef";
  for (std::size_t c = 0; c < nibbles; ++c) {
    unsigned v = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      std::size_t j = order == BitOrder::Msb ? 4 * c + b : 4 * (nibbles - 1 - c) + (3 - b);
      v = (v << 1) | unsigned(j < k && sel.test(j));
    }
    out[c] = kDigits[v];
  }
  return out;
}

inline SubsetBits from_hex(std::string_view hex, std::size_t k, BitOrder order = BitOrder::Msb) {
  if (hex.size() != (k + 3) / 4) {
    throw InputError("hex descriptor has " + std::to_string(hex.size()) + " digits, expected " +
                     std::to_string((k + 3) / 4));
  }
  SubsetBits sel(k);
  const std::size_t nibbles = hex.size();
  for (std::size_t c = 0; c < nibbles; ++c) {
    char ch = hex[c];
    unsigned v;
    if (ch >= '0' && ch <= '9') {
      v = unsigned(ch - '0');
    } else if (ch >= 'a' && ch <= 'f') {
      v = unsigned(ch - 'a' + 10);
    } else if (ch >= 'A' && ch <= 'F') {
      v = unsigned(ch - 'A' + 10);
    } else {
      throw InputError(std::string("bad hex digit '") + ch + "'");
    }
    for (std::size_t b = 0; b < 4; ++b) {
      bool bit = (v >> (3 - b)) & 1;
      std::size_t j = order == BitOrder::Msb ? 4 * c + b : 4 * (nibbles - 1 - c) + (3 - b);
      if (!bit) continue;
      if (j >= k) throw InputError("hex descriptor sets padding bits");
      sel.set(j);
    }
  }
  return sel;
}

}  // namespace subsetprod
