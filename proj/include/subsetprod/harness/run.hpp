#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "subsetprod/bsgs.hpp"
#include "subsetprod/harness/records.hpp"
#include "subsetprod/parallel.hpp"

namespace subsetprod::harness {

inline BitOrder parse_bit_order(const std::string& s) {
  if (s == "msb") return BitOrder::Msb;
  if (s == "lsb") return BitOrder::Lsb;
  throw UsageError("bit order must be msb or lsb, got '" + s + "'");
}

inline EtaMode parse_eta(const std::string& s) {
  if (s == "keyed" || s == "keyed-hash") return EtaMode::Keyed;
  if (s == "toy" || s == "toy-linear") return EtaMode::ToyLinear;
  throw UsageError("eta must be keyed-hash or toy-linear, got '" + s + "'");
}

template <FiniteGroup G>
Instance<G> build_instance(const G& group, const RunConfig& cfg) {
  const std::string& kind = cfg.seq;
  if (kind == "toy") {
    if constexpr (std::is_same_v<G, ZnGroup>) {
      if (group.modulus() != 127) throw UsageError("--seq toy needs --group zn:127");
      return build_toy_instance();
    } else {
      throw UsageError("--seq toy needs --group zn:127");
    }
  }
  if (cfg.k < 2) throw UsageError("--k must be at least 2");
  constexpr bool is_curve = std::is_same_v<G, CurveGroup<u64>> || std::is_same_v<G, CurveGroup<BigInt>>;
  constexpr bool is_class = std::is_same_v<G, ClassGroup<i128>> || std::is_same_v<G, ClassGroup<BigInt>>;
  if (kind == "curve" || (kind == "auto" && is_curve)) {
    if constexpr (is_curve) {
      return build_curve_sequence(group, cfg.k);
    } else {
      throw UsageError("--seq curve needs a curve group");
    }
  }
  if (kind == "class" || kind == "class-desc" || (kind == "auto" && is_class)) {
    if constexpr (is_class) {
      return build_class_sequence(group, cfg.k, kind == "class-desc" ? PrimeOrder::Reversed : PrimeOrder::Ascending);
    } else {
      throw UsageError("--seq class needs a class group");
    }
  }
  if (kind == "random" || kind == "auto") return build_random_sequence(group, cfg.k, cfg.seq_seed);
  throw UsageError("unknown sequence kind '" + kind + "' (auto, toy, curve, class, class-desc, random)");
}

struct SolveRun {
  ResultRecord record;
  SolveStatus status = SolveStatus::NotFound;
  std::string summary;
};

// Run-local settings that do not change the result (not part of the config hash).
struct SolveIo {
  std::optional<std::string> checkpoint_path;
  bool resume = false;
};

template <FiniteGroup G>
SolveRun solve_with(const G& group, const RunConfig& cfg, const SolveIo& io = {}) {
  if (io.checkpoint_path && cfg.alg != "rho-parallel") throw UsageError("--checkpoint applies to --alg rho-parallel only");
  SolveRun out;
  out.record.config = cfg;
  if (auto n = group.order()) out.record.group_order = to_string(*n);
  const auto inst = build_instance(group, cfg);
  const auto& seq = inst.seq;
  const auto& z = inst.target.z;
  const BitOrder order = parse_bit_order(cfg.bit_order);
  const auto t0 = std::chrono::steady_clock::now();

  std::unique_ptr<PrecomputeTable<G>> table;
  if (cfg.precompute_m > 0 && (cfg.alg == "rho" || cfg.alg == "rho-parallel")) {
    table = std::make_unique<PrecomputeTable<G>>(seq, cfg.precompute_m);
  }
  std::optional<Answer> answer;
  auto& rec = out.record;
  if (cfg.alg == "bsgs" || cfg.alg == "bsgs-rand") {
    BsgsConfig bc;
    bc.seed = cfg.seed;
    bc.randomized = cfg.alg == "bsgs-rand";
    auto r = bc.randomized ? bsgs_solve_randomized(seq, z, bc) : bsgs_solve(seq, z, bc);
    out.status = r.status;
    answer = r.answer;
    rec.group_ops = r.group_ops;
  } else if (cfg.alg == "rho") {
    RhoOptions ro;
    ro.seed = cfg.seed;
    ro.eta = parse_eta(cfg.eta);
    ro.restart_budget = cfg.restart_budget;
    if (cfg.start) ro.start = parse_mask(*cfg.start, seq.size_a(), seq.size_b());
    auto r = rho_solve(seq, z, ro, table.get());
    out.status = r.status;
    answer = r.answer;
    rec.c = r.outcome.collisions;
    rec.rho_tot = r.outcome.rho_total;
    rec.phi_evals = r.outcome.phi_evals;
    rec.group_ops = r.outcome.group_ops;
    rec.tail = r.outcome.tail;
    rec.cycle = r.outcome.cycle;
  } else if (cfg.alg == "rho-parallel") {
    if (cfg.start) throw UsageError("--start applies to --alg rho only");
    ParallelOptions po;
    po.seed = cfg.seed;
    po.workers = cfg.workers;
    po.lanes = cfg.lanes;
    po.dist_bits = cfg.dist_bits;
    po.eta = parse_eta(cfg.eta);
    po.restart_budget = cfg.restart_budget;
    po.checkpoint_path = io.checkpoint_path;
    po.resume = io.resume;
    auto r = rho_solve_parallel(seq, z, po, table.get());
    out.status = r.status;
    answer = r.answer;
    rec.c = r.collisions;
    rec.rho_tot = r.rho_total;
    rec.phi_evals = r.phi_evals;
    rec.group_ops = r.group_ops;
  } else {
    throw UsageError("unknown algorithm '" + cfg.alg + "' (bsgs, bsgs-rand, rho, rho-parallel)");
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rec.status = to_string(out.status);
  if (answer) {
    const std::string hex = to_hex(answer->subset, order);
    const SubsetBits back = from_hex(hex, seq.k(), order);
    rec.answer_hex = hex;
    rec.popcount = back.count();
    rec.verified = subset_product(seq, back) == z;
    if (!rec.verified) throw InternalError("emitted answer failed re-verification");
    out.summary = "z = " + group.format(z) + " as " + format_mask(answer->x) + " " + format_mask(answer->y);
  }
  return out;
}

inline SolveRun run_solve(const RunConfig& cfg, const SolveIo& io = {}) {
  std::optional<BigInt> order;
  if (cfg.order) order = parse_big(*cfg.order);
  AnyGroup g = parse_group(cfg.group, order);
  return std::visit([&](const auto& grp) { return solve_with(grp, cfg, io); }, g);
}

}  // namespace subsetprod::harness
