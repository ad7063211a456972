#pragma once

#include <bit>
#include <cmath>
#include <optional>
#include <unordered_map>
#include <vector>

#include "subsetprod/hash.hpp"
#include "subsetprod/sequence.hpp"
#include "subsetprod/solve.hpp"

namespace subsetprod {

struct BsgsConfig {
  std::optional<std::size_t> split_a;  // #A override
  bool randomized = false;
  std::uint64_t max_table_entries = std::uint64_t(1) << 24;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> step_budget;  // randomized giant steps; default 100 sqrt(n)
};

struct BsgsResult {
  SolveStatus status = SolveStatus::NotFound;
  std::optional<Answer> answer;
  std::uint64_t group_ops = 0;
  std::uint64_t baby_ops = 0;
  std::uint64_t table_entries = 0;
  std::uint64_t giant_steps = 0;
};

namespace detail {

inline const Key128 kTableKey{0x62736773'7461626cULL, 0x652d6b65'79000001ULL};

// pi-value table: 64-bit keyed fingerprint of the canonical encoding -> slot.
// The first slot stored under a fingerprint is kept; hits are confirmed by
// the caller against the full encoding.
class FingerprintTable {
 public:
  explicit FingerprintTable(std::size_t reserve) { map_.reserve(reserve); }
  static std::uint64_t fingerprint(const Encoding& e) { return SipHash::hash(kTableKey, e); }
  void insert(const Encoding& e, std::uint64_t slot) { map_.try_emplace(fingerprint(e), slot); }
  std::optional<std::uint64_t> find(const Encoding& e) const {
    auto it = map_.find(fingerprint(e));
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t size() const { return map_.size(); }

 private:
  std::unordered_map<std::uint64_t, std::uint64_t> map_;
};

inline MaskBits bits_from_word(std::size_t len, std::uint64_t w) {
  MaskBits b(len);
  for (std::size_t i = 0; i < len; ++i) {
    if ((w >> i) & 1) b.set(i);
  }
  return b;
}

// Visits all 2^len subsets of `elems` with a running ordered product
// start * prod(selected). Abelian groups walk the reflected Gray code (one
// operation per step, using inverses to drop an element). Otherwise a DFS
// over include/exclude keeps the ordered product valid, still 2^len - 1
// operations in total. `reverse` processes elements last-to-first, which
// gives start * e_m * ... * e_1 for the B side. Stops when visit returns true.
template <FiniteGroup G, class Visit>
void enumerate_subsets(const G& group, const std::vector<Element<G>>& elems, const std::vector<Element<G>>& inverses,
                       const Element<G>& start, bool reverse, std::uint64_t& ops, Visit&& visit) {
  const std::size_t len = elems.size();
  if (len >= 63) throw CapabilityError("exhaustive enumeration over more than 62 elements");
  auto idx = [&](std::size_t i) { return reverse ? len - 1 - i : i; };
  if constexpr (G::kAbelian) {
    Element<G> acc = start;
    std::uint64_t bits = 0;
    if (visit(bits, acc)) return;
    const std::uint64_t total = std::uint64_t(1) << len;
    for (std::uint64_t t = 1; t < total; ++t) {
      const auto i = std::size_t(std::countr_zero(t));
      const std::size_t j = idx(i);
      bits ^= std::uint64_t(1) << j;
      acc = group.op(acc, (bits >> j) & 1 ? elems[j] : inverses[j]);
      ++ops;
      if (visit(bits, acc)) return;
    }
  } else {
    (void)inverses;
    bool stop = false;
    auto rec = [&](auto&& self, std::size_t depth, std::uint64_t bits, const Element<G>& acc) -> void {
      if (stop) return;
      if (depth == len) {
        stop = visit(bits, acc);
        return;
      }
      const std::size_t j = idx(depth);
      self(self, depth + 1, bits, acc);
      if (stop) return;
      ++ops;
      self(self, depth + 1, bits | (std::uint64_t(1) << j), group.op(acc, elems[j]));
    };
    rec(rec, 0, 0, start);
  }
}

template <FiniteGroup G>
BsgsResult finish(const Sequence<G>& seq, const Element<G>& z, const MaskBits& xa, const MaskBits& yb, BsgsResult r) {
  Mask x{Side::A, xa}, y{Side::B, yb};
  r.answer = Answer{x, y, assemble_answer(seq, x, y, z)};
  r.status = SolveStatus::Found;
  return r;
}

}  // namespace detail

// Deterministic baby-step giant-step: table of pi(x) over all of P(A), then
// a scan of P(B) computing pi(z mu(y)).
template <FiniteGroup G>
BsgsResult bsgs_solve(const Sequence<G>& seq_in, const Element<G>& z, const BsgsConfig& cfg = {}) {
  if (cfg.max_table_entries < 1) throw UsageError("max_table_entries must be >= 1");
  const Sequence<G> seq = cfg.split_a ? seq_in.with_split(*cfg.split_a) : seq_in;
  const auto& group = seq.group();
  const std::size_t la = seq.size_a(), lb = seq.size_b();
  if (la >= 63 || (std::uint64_t(1) << la) > cfg.max_table_entries) {
    throw CapabilityError("baby-step table needs 2^" + std::to_string(la) + " entries, above the cap of " +
                          std::to_string(cfg.max_table_entries) + "; use --alg bsgs-rand or rho");
  }
  if (lb >= 63) throw CapabilityError("giant-step scan over more than 62 elements");

  std::vector<Element<G>> a, a_inv, binv, b;
  for (std::size_t i = 0; i < la; ++i) {
    a.push_back(seq.a(i));
    a_inv.push_back(group.inv(seq.a(i)));
  }
  for (std::size_t i = 0; i < lb; ++i) {
    binv.push_back(seq.b_inv(i));
    b.push_back(seq.b(i));
  }

  BsgsResult res;
  detail::FingerprintTable table(std::size_t(1) << la);
  std::uint64_t ops = 0;
  detail::enumerate_subsets(group, a, a_inv, group.identity(), false, ops, [&](std::uint64_t bits, const Element<G>& v) {
    table.insert(group.encode(v), bits);
    return false;
  });
  res.baby_ops = ops;
  res.table_entries = table.size();

  std::optional<std::pair<std::uint64_t, std::uint64_t>> hit;
  detail::enumerate_subsets(group, binv, b, z, true, ops, [&](std::uint64_t bits, const Element<G>& v) {
    ++res.giant_steps;
    const Encoding e = group.encode(v);
    auto slot = table.find(e);
    if (!slot) return false;
    Mask x{Side::A, detail::bits_from_word(la, *slot)};
    if (!(group.encode(product(seq, x)) == e)) return false;  // fingerprint clash
    hit = {*slot, bits};
    return true;
  });
  res.group_ops = ops;
  if (!hit) return res;
  return detail::finish(seq, z, detail::bits_from_word(la, hit->first), detail::bits_from_word(lb, hit->second), res);
}

inline MaskBits random_bits(std::size_t len, Rng& rng) {
  MaskBits b(len);
  b.fill([&] { return rng(); });
  return b;
}

// ceil(sqrt(n)) random baby steps, then independent random giant steps until
// a collision or the step budget runs out.
template <FiniteGroup G>
BsgsResult bsgs_solve_randomized(const Sequence<G>& seq_in, const Element<G>& z, const BsgsConfig& cfg = {}) {
  const Sequence<G> seq = cfg.split_a ? seq_in.with_split(*cfg.split_a) : seq_in;
  const auto& group = seq.group();
  auto n = group.order();
  if (!n) throw CapabilityError("randomized BSGS needs the group order");
  const double root = std::sqrt(static_cast<double>(*n));
  const auto baby = std::uint64_t(std::ceil(root));
  const std::uint64_t budget = cfg.step_budget.value_or(std::uint64_t(std::ceil(100 * root)));
  BsgsResult res;
  if (budget == 0) {
    res.status = SolveStatus::BudgetExhausted;
    return res;
  }
  if (baby > cfg.max_table_entries) {
    throw CapabilityError("randomized BSGS needs " + std::to_string(baby) + " table entries, above the cap");
  }
  Rng rng(cfg.seed);
  std::uint64_t ops = 0;
  auto count_ops = [&](const MaskBits& m, bool side_b) {
    std::size_t c = m.count();
    ops += side_b ? c : (c ? c - 1 : 0);
  };
  std::vector<MaskBits> stored;
  stored.reserve(std::size_t(baby));
  detail::FingerprintTable table{std::size_t(baby)};
  for (std::uint64_t i = 0; i < baby; ++i) {
    MaskBits x = random_bits(seq.size_a(), rng);
    count_ops(x, false);
    table.insert(group.encode(product(seq, Mask{Side::A, x})), stored.size());
    stored.push_back(x);
  }
  res.baby_ops = ops;
  res.table_entries = table.size();
  for (std::uint64_t step = 0; step < budget; ++step) {
    MaskBits y = random_bits(seq.size_b(), rng);
    count_ops(y, true);
    ++res.giant_steps;
    const Encoding e = group.encode(mu_product(seq, Mask{Side::B, y}, z));
    auto slot = table.find(e);
    if (!slot) continue;
    const MaskBits& x = stored[*slot];
    if (!(group.encode(product(seq, Mask{Side::A, x})) == e)) continue;
    res.group_ops = ops;
    return detail::finish(seq, z, x, y, res);
  }
  res.group_ops = ops;
  res.status = SolveStatus::BudgetExhausted;
  return res;
}

}  // namespace subsetprod
