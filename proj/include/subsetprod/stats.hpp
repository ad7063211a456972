#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "subsetprod/sequence.hpp"

namespace subsetprod {

struct CostModel {
  double n = 0;
  double size_c = 0;  // 2^#A + 2^#B
  double r = 0;       // n / #C
  double expected_c = 0;
  double expected_rho_tot = 0;
  // density below 2: the point estimates above are optimistic; cost grows
  // like n^((4-d)/4)
  bool low_density = false;
  std::optional<double> density;
};

// E[c] = 2(1 + r), E[rho_tot] = sqrt(2 pi n (1 + r)), r = n / (2^kA + 2^kB).
inline CostModel expected_stats(double n, std::size_t k_a, std::size_t k_b) {
  if (!(n >= 2)) throw UsageError("expected_stats: n must be >= 2");
  if (k_a < 1 || k_b < 1) throw UsageError("expected_stats: both halves must be non-empty");
  CostModel m;
  m.n = n;
  m.size_c = std::exp2(double(k_a)) + std::exp2(double(k_b));
  m.r = n / m.size_c;
  m.expected_c = 2 * (1 + m.r);
  m.expected_rho_tot = std::sqrt(2 * std::numbers::pi * n * (1 + m.r));
  m.density = double(k_a + k_b) / std::log2(n);
  m.low_density = *m.density < 1.995;
  return m;
}

inline CostModel expected_stats(const BigInt& n, std::size_t k_a, std::size_t k_b) {
  return expected_stats(static_cast<double>(n), k_a, k_b);
}

struct RunAggregate {
  std::uint64_t runs = 0;
  double mean_c = 0, se_c = 0;
  double mean_rho_tot = 0, se_rho_tot = 0;
  double mean_phi_evals = 0;
  double mean_group_ops = 0;
  double wall_seconds = 0;
};

// Welford accumulation, one completed run at a time.
class RunAccumulator {
 public:
  void add(double c, double rho_tot, double phi_evals, double group_ops) {
    ++n_;
    step(c_, c);
    step(rho_, rho_tot);
    step(phi_, phi_evals);
    step(ops_, group_ops);
  }

  RunAggregate result(double wall_seconds = 0) const {
    if (n_ == 0) throw UsageError("aggregate over zero runs");
    RunAggregate a;
    a.runs = n_;
    a.mean_c = c_.mean;
    a.se_c = se(c_);
    a.mean_rho_tot = rho_.mean;
    a.se_rho_tot = se(rho_);
    a.mean_phi_evals = phi_.mean;
    a.mean_group_ops = ops_.mean;
    a.wall_seconds = wall_seconds;
    return a;
  }

 private:
  struct Moments {
    double mean = 0, m2 = 0;
  };
  void step(Moments& m, double x) const {
    double d = x - m.mean;
    m.mean += d / double(n_);
    m.m2 += d * (x - m.mean);
  }
  double se(const Moments& m) const { return n_ > 1 ? std::sqrt(m.m2 / double(n_ - 1) / double(n_)) : 0.0; }

  std::uint64_t n_ = 0;
  Moments c_, rho_, phi_, ops_;
};

// Half the L1 distance. Both inputs must sum to 1 within 1e-9.
inline double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw InputError("tv_distance: distributions over different sets");
  double sp = 0, sq = 0, l1 = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0 || q[i] < 0) throw InputError("tv_distance: negative probability");
    sp += p[i];
    sq += q[i];
    l1 += std::abs(p[i] - q[i]);
  }
  if (std::abs(sp - 1) > 1e-9 || std::abs(sq - 1) > 1e-9) throw InputError("tv_distance: input not normalized");
  return l1 / 2;
}

// Exact histogram of pi over P(side): counts[g] = #{masks with pi = g}, over
// 2^#side masks. Zn only (elements index themselves). Built by a running
// convolution, one element at a time.
struct Pushforward {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  std::vector<double> distribution() const {
    std::vector<double> d(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) d[i] = double(counts[i]) / double(total);
    return d;
  }
};

inline constexpr std::size_t kPushforwardSideCap = 26;
inline constexpr u64 kPushforwardOrderCap = u64(1) << 22;

inline Pushforward pushforward(const Sequence<ZnGroup>& seq, Side side) {
  const std::size_t len = seq.half_size(side);
  const u64 n = seq.group().modulus();
  if (len > kPushforwardSideCap) throw CapabilityError("pushforward: more than 2^26 masks");
  if (n > kPushforwardOrderCap) throw CapabilityError("pushforward: group order above 2^22");
  Pushforward pf;
  pf.counts.assign(std::size_t(n), 0);
  pf.counts[0] = 1;
  std::vector<std::uint64_t> next(pf.counts.size());
  for (std::size_t i = 0; i < len; ++i) {
    const u64 s = (side == Side::A ? seq.a(i) : seq.b(i)).value;
    for (u64 g = 0; g < n; ++g) next[g] = pf.counts[g] + pf.counts[(g + n - s) % n];
    pf.counts.swap(next);
  }
  pf.total = std::uint64_t(1) << len;
  return pf;
}

inline double tv_to_uniform(const Pushforward& pf) {
  const double u = 1.0 / double(pf.counts.size());
  double l1 = 0;
  for (auto c : pf.counts) l1 += std::abs(double(c) / double(pf.total) - u);
  return l1 / 2;
}

}  // namespace subsetprod
