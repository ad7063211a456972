#pragma once

#include <cmath>
#include <optional>
#include <type_traits>
#include <vector>

#include "subsetprod/hash.hpp"
#include "subsetprod/sequence.hpp"
#include "subsetprod/solve.hpp"

namespace subsetprod {

enum class EtaMode { ToyLinear, Keyed };

struct EtaSpec {
  EtaMode mode = EtaMode::Keyed;
  Key128 key{};
  u64 multiplier = 96;
};

// ---------------------------------------------------------------------------
// Partial-product tables

// Each half is cut into blocks of m consecutive elements. A-blocks store the
// forward product of every sub-mask, B-blocks store y_j^{-1} ... y_i^{-1}
// (descending indices) so that z mu(y) is z times the B-blocks last to first.
template <FiniteGroup G>
class PrecomputeTable {
 public:
  using E = Element<G>;

  static std::uint64_t entries_for(std::size_t len_a, std::size_t len_b, std::size_t m) {
    if (m < 1 || m > 30) throw UsageError("precompute block length must be in [1, 30]");
    std::uint64_t total = 0;
    for (std::size_t len : {len_a, len_b}) {
      for (std::size_t pos = 0; pos < len; pos += m) total += std::uint64_t(1) << std::min(m, len - pos);
    }
    return total;
  }

  PrecomputeTable(const Sequence<G>& seq, std::size_t m, std::uint64_t max_entries = std::uint64_t(1) << 24)
      : m_(m) {
    const std::uint64_t need = entries_for(seq.size_a(), seq.size_b(), m);
    if (need > max_entries) {
      throw CapabilityError("precompute table needs " + std::to_string(need) + " entries, above the cap of " +
                            std::to_string(max_entries));
    }
    const auto& group = seq.group();
    for (int s = 0; s < 2; ++s) {
      const bool side_b = s == 1;
      const std::size_t len = side_b ? seq.size_b() : seq.size_a();
      auto& blocks = side_b ? b_ : a_;
      for (std::size_t pos = 0; pos < len; pos += m) {
        const std::size_t w = std::min(m, len - pos);
        std::vector<E> t(std::size_t(1) << w, group.identity());
        for (std::size_t mask = 1; mask < t.size(); ++mask) {
          if (!side_b) {
            // highest selected element goes last
            const std::size_t hi = std::size_t(std::bit_width(mask)) - 1;
            t[mask] = group.op(t[mask ^ (std::size_t(1) << hi)], seq.a(pos + hi));
          } else {
            // lowest selected index is inverted last
            const std::size_t lo = std::size_t(std::countr_zero(mask));
            t[mask] = group.op(t[mask ^ (std::size_t(1) << lo)], seq.b_inv(pos + lo));
          }
        }
        blocks.push_back({pos, w, std::move(t)});
      }
    }
  }

  std::size_t block_length() const { return m_; }

  std::uint64_t entries() const {
    std::uint64_t n = 0;
    for (const auto* v : {&a_, &b_}) {
      for (const auto& b : *v) n += b.table.size();
    }
    return n;
  }

  std::size_t blocks(Side s) const { return s == Side::A ? a_.size() : b_.size(); }
  const E& entry(Side s, std::size_t block, std::size_t mask) const {
    return (s == Side::A ? a_ : b_)[block].table[mask];
  }

  // pi on C: pi(x) for side A, pi(z mu(y)) for side B.
  E value(const G& group, const E& z, const Mask& c, OpCounter& ops) const {
    if (c.side == Side::A) {
      std::optional<E> acc;
      for (const auto& blk : a_) {
        const auto idx = std::size_t(c.bits.extract(blk.pos, blk.width));
        if (idx == 0) continue;
        if (!acc) {
          acc = blk.table[idx];
        } else {
          acc = group.op(*acc, blk.table[idx]);
          ++ops.group_ops;
        }
      }
      return acc ? *acc : group.identity();
    }
    E acc = z;
    for (auto it = b_.rbegin(); it != b_.rend(); ++it) {
      const auto idx = std::size_t(c.bits.extract(it->pos, it->width));
      if (idx == 0) continue;
      acc = group.op(acc, it->table[idx]);
      ++ops.group_ops;
    }
    return acc;
  }

 private:
  struct Block {
    std::size_t pos;
    std::size_t width;
    std::vector<E> table;
  };
  std::size_t m_;
  std::vector<Block> a_, b_;
};

template <FiniteGroup G>
Element<G> walk_value(const Sequence<G>& seq, const Element<G>& z, const CPoint& c,
                      const PrecomputeTable<G>* table, OpCounter& ops) {
  const auto& group = seq.group();
  if (table) return table->value(group, z, c, ops);
  if (c.side == Side::A) {
    std::optional<Element<G>> acc;
    for (std::size_t i = 0; i < seq.size_a(); ++i) {
      if (!c.bits.test(i)) continue;
      if (!acc) {
        acc = seq.a(i);
      } else {
        acc = group.op(*acc, seq.a(i));
        ++ops.group_ops;
      }
    }
    return acc ? *acc : group.identity();
  }
  Element<G> acc = z;
  for (std::size_t i = seq.size_b(); i-- > 0;) {
    if (!c.bits.test(i)) continue;
    acc = group.op(acc, seq.b_inv(i));
    ++ops.group_ops;
  }
  return acc;
}

template <FiniteGroup G>
Element<G> walk_value(const Sequence<G>& seq, const Element<G>& z, const CPoint& c) {
  OpCounter ops;
  return walk_value<G>(seq, z, c, nullptr, ops);
}

// ---------------------------------------------------------------------------
// eta : G -> C

// Toy mode: v = multiplier * x mod n with bits b_0 b_1 ... (b_0 lowest).
// b_0 = 1 selects side A with indices {i : b_i = 1}; b_0 = 0 selects side B
// with the reflected indices {k/2 + 1 - i : b_i = 1}.
template <FiniteGroup G>
CPoint eta_toy(const EtaSpec& spec, const Element<G>& g, const Sequence<G>& seq) {
  if constexpr (!std::is_same_v<G, ZnGroup>) {
    throw UsageError("toy-linear eta needs a zn group");
  } else {
    if (seq.size_a() != seq.size_b()) throw UsageError("toy-linear eta needs an even split (#A = #B)");
    const std::size_t h = seq.size_a();
    const u64 v = mul_mod(spec.multiplier % seq.group().modulus(), g.value, seq.group().modulus());
    CPoint c;
    c.side = (v & 1) ? Side::A : Side::B;
    c.bits = MaskBits(h);
    for (std::size_t i = 1; i <= h && i < 64; ++i) {
      if (!((v >> i) & 1)) continue;
      c.bits.set(c.side == Side::A ? i - 1 : h - i);
    }
    return c;
  }
}

// Keyed mode: SipHash-2-4 of the canonical encoding in counter mode; bit 0
// chooses the side, the next #side bits are the mask.
inline CPoint eta_keyed(const Key128& key, const Encoding& enc, std::size_t len_a, std::size_t len_b) {
  KeyedStream stream(key, enc);
  std::array<std::uint64_t, 5> w{};
  w[0] = stream.word(0);
  CPoint c;
  c.side = (w[0] & 1) ? Side::A : Side::B;
  const std::size_t len = c.side == Side::A ? len_a : len_b;
  const std::size_t words = (len + 1 + 63) / 64;
  for (std::size_t i = 1; i < words; ++i) w[i] = stream.word(i);
  c.bits = MaskBits(len);
  std::size_t i = 0;
  c.bits.fill([&] {
    std::uint64_t v = w[i] >> 1 | (w[i + 1] << 63);
    ++i;
    return v;
  });
  return c;
}

template <FiniteGroup G>
CPoint eta(const EtaSpec& spec, const Element<G>& g, const Sequence<G>& seq) {
  if (spec.mode == EtaMode::ToyLinear) return eta_toy(spec, g, seq);
  return eta_keyed(spec.key, seq.group().encode(g), seq.size_a(), seq.size_b());
}

// ---------------------------------------------------------------------------
// The walk phi = eta o pi on C

template <FiniteGroup G>
class Walker {
 public:
  using E = Element<G>;

  Walker(const Sequence<G>& seq, E z, EtaSpec spec, const PrecomputeTable<G>* table = nullptr)
      : seq_(&seq), z_(std::move(z)), spec_(spec), table_(table) {
    if (spec_.mode == EtaMode::ToyLinear) eta_toy(spec_, seq.group().identity(), seq);  // validates
  }

  const Sequence<G>& seq() const { return *seq_; }
  const E& target() const { return z_; }
  const EtaSpec& spec() const { return spec_; }

  E value(const CPoint& c) { return walk_value(*seq_, z_, c, table_, ops_); }

  CPoint eta_of(const E& g) const { return eta(spec_, g, *seq_); }

  CPoint phi(const CPoint& c) {
    ++ops_.phi_evals;
    return eta_of(value(c));
  }

  // phi plus the encoding of the pi-value it hashed.
  CPoint phi(const CPoint& c, Encoding& enc) {
    ++ops_.phi_evals;
    enc = seq_->group().encode(value(c));
    if (spec_.mode == EtaMode::ToyLinear) return eta_toy(spec_, seq_->group().decode(enc), *seq_);
    return eta_keyed(spec_.key, enc, seq_->size_a(), seq_->size_b());
  }

  OpCounter& ops() { return ops_; }
  const OpCounter& ops() const { return ops_; }

 private:
  const Sequence<G>* seq_;
  E z_;
  EtaSpec spec_;
  const PrecomputeTable<G>* table_;
  OpCounter ops_;
};

template <FiniteGroup G>
CPoint phi(const Sequence<G>& seq, const Element<G>& z, const EtaSpec& spec, const CPoint& c) {
  Walker<G> w(seq, z, spec);
  return w.phi(c);
}

struct FloydResult {
  std::uint64_t tail = 0;
  std::uint64_t cycle = 0;
  CPoint s;  // phi^{tail+cycle-1}(w)
  CPoint t;  // phi^{tail-1}(w)
  bool restart() const { return tail == 0; }
};

// Floyd: find nu with x_nu = x_2nu, then the tail mu by walking from w and
// x_nu in step (keeping the previous pair as the colliding predecessors),
// then the cycle length. O(1) CPoints stored.
template <FiniteGroup G>
FloydResult floyd_collide(Walker<G>& walker, const CPoint& w) {
  CPoint tort = walker.phi(w);
  CPoint hare = walker.phi(walker.phi(w));
  while (!(tort == hare)) {
    tort = walker.phi(tort);
    hare = walker.phi(walker.phi(hare));
  }
  FloydResult r;
  CPoint x = w, y = hare, px = w, py = hare;
  std::uint64_t mu = 0;
  while (!(x == y)) {
    px = x;
    py = y;
    x = walker.phi(x);
    y = walker.phi(y);
    ++mu;
  }
  std::uint64_t lambda = 1;
  for (CPoint u = walker.phi(x); !(u == x); u = walker.phi(u)) ++lambda;
  r.tail = mu;
  r.cycle = lambda;
  if (mu > 0) {
    r.t = px;
    r.s = py;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Full solver

struct WalkOutcome {
  std::uint64_t tail = 0;
  std::uint64_t cycle = 0;
  CPoint s, t;
  std::uint64_t collisions = 0;  // c
  std::uint64_t rho_total = 0;   // sum of tail + cycle
  std::uint64_t phi_evals = 0;
  std::uint64_t group_ops = 0;
  std::uint64_t restarts = 0;
};

struct RhoOptions {
  std::uint64_t seed = 1;
  EtaMode eta = EtaMode::Keyed;
  u64 multiplier = 96;
  std::uint64_t restart_budget = 64;
  std::optional<CPoint> start;  // first walk only
};

struct RhoResult {
  SolveStatus status = SolveStatus::BudgetExhausted;
  std::optional<Answer> answer;
  WalkOutcome outcome;
};

// Uniform on C: side A with probability 2^#A / (2^#A + 2^#B).
inline CPoint random_cpoint(std::size_t len_a, std::size_t len_b, Rng& rng) {
  const double p_a = 1.0 / (1.0 + std::exp2(double(len_b) - double(len_a)));
  CPoint c;
  c.side = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p_a ? Side::A : Side::B;
  c.bits = MaskBits(c.side == Side::A ? len_a : len_b);
  c.bits.fill([&] { return rng(); });
  return c;
}

inline constexpr std::uint64_t kStartTag = 0x7374617274ULL;
inline constexpr std::uint64_t kKeyTag = 0x6b6579ULL;

// Restart r of a solve with global `seed` uses hash key walk_key(seed, r);
// walk `id` of that restart starts at walk_start(seed, r, id, ...).
inline Key128 walk_key(std::uint64_t seed, std::uint64_t restart) { return derive_key(seed, restart, kKeyTag); }

inline CPoint walk_start(std::uint64_t seed, std::uint64_t restart, std::uint64_t id, std::size_t len_a,
                         std::size_t len_b) {
  Rng rng(derive_seed(seed, (restart << 32) | id, kStartTag));
  return random_cpoint(len_a, len_b, rng);
}

// Steps 5-8 on a colliding pair with phi(s) = phi(t): a pi-collision between
// opposite sides gives the answer.
template <FiniteGroup G>
std::optional<Answer> examine_collision(const Sequence<G>& seq, const Element<G>& z, const CPoint& s, const CPoint& t,
                                        const Element<G>& pi_s, const Element<G>& pi_t) {
  if (!(pi_s == pi_t)) return std::nullopt;
  if (s.side == t.side) return std::nullopt;
  const CPoint& x = s.side == Side::A ? s : t;
  const CPoint& y = s.side == Side::A ? t : s;
  return Answer{x, y, assemble_answer(seq, x, y, z)};
}

template <FiniteGroup G>
RhoResult rho_solve(const Sequence<G>& seq, const Element<G>& z, const RhoOptions& opts = {},
                    const PrecomputeTable<G>* table = nullptr) {
  RhoResult res;
  WalkOutcome& out = res.outcome;
  OpCounter total;
  for (std::uint64_t r = 0; r < opts.restart_budget; ++r) {
    EtaSpec spec{opts.eta, walk_key(opts.seed, r), opts.multiplier};
    Walker<G> walker(seq, z, spec, table);
    const CPoint w = (r == 0 && opts.start) ? *opts.start : walk_start(opts.seed, r, 0, seq.size_a(), seq.size_b());
    if (w.bits.size() != seq.half_size(w.side)) throw UsageError("start point does not match the sequence split");
    FloydResult f = floyd_collide(walker, w);
    out.rho_total += f.tail + f.cycle;
    out.tail = f.tail;
    out.cycle = f.cycle;
    out.restarts = r;
    if (f.restart()) {
      total += walker.ops();
      continue;
    }
    ++out.collisions;
    out.s = f.s;
    out.t = f.t;
    const auto pi_s = walker.value(f.s);
    const auto pi_t = walker.value(f.t);
    total += walker.ops();
    if (auto ans = examine_collision(seq, z, f.s, f.t, pi_s, pi_t)) {
      res.answer = std::move(ans);
      res.status = SolveStatus::Found;
      break;
    }
  }
  out.phi_evals = total.phi_evals;
  out.group_ops = total.group_ops;
  return res;
}

}  // namespace subsetprod
