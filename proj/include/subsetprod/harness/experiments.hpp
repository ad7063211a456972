#pragma once

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "subsetprod/descriptor.hpp"
#include "subsetprod/harness/table_rows.hpp"
#include "subsetprod/rho.hpp"
#include "subsetprod/stats.hpp"

namespace subsetprod::harness {

inline constexpr int kSchemaVersion = 1;

// Where a row's group order came from.
enum class OrderSource { Computed, External };

inline const char* to_string(OrderSource s) { return s == OrderSource::Computed ? "computed" : "external"; }

struct RowOrder {
  BigInt n;
  OrderSource source;
};

inline RowOrder row_order(const PublishedRow& row) {
  if (row.external_order) return {parse_big(*row.external_order), OrderSource::External};
  AnyGroup g = parse_group(row.descriptor);
  auto n = std::visit([](const auto& grp) { return std::optional<BigInt>(grp.order()); }, g);
  if (!n) throw CapabilityError("no order available for " + row.descriptor);
  return {*n, OrderSource::Computed};
}

inline CostModel row_expected(const PublishedRow& row, const BigInt& n) {
  return expected_stats(n, (row.k + 1) / 2, row.k / 2);
}

struct RowRunOptions {
  std::uint64_t runs = 1000;
  std::uint64_t seed = 1;
  std::size_t precompute_m = 8;
  std::uint64_t restart_budget = 64;
};

struct RowResult {
  PublishedRow row;
  RowOrder order;
  CostModel expected;
  std::optional<RunAggregate> observed;
  std::uint64_t failed = 0;  // runs that hit the restart budget
};

namespace detail {

inline constexpr std::uint64_t kRunTag = 0x72756e;
inline constexpr std::uint64_t kSeqTag = 0x736571;

// Runs rho_solve `runs` times. make(i) returns the instance of run i; when
// `fixed` the first instance (and its table) is reused for every run.
template <FiniteGroup G, class Make>
void rho_batch(Make&& make, bool fixed, const RowRunOptions& opts, RunAccumulator& acc, std::uint64_t& failed) {
  std::optional<Instance<G>> inst;
  std::unique_ptr<PrecomputeTable<G>> table;
  for (std::uint64_t i = 0; i < opts.runs; ++i) {
    if (!inst || !fixed) {
      inst.emplace(make(i));
      table.reset();
      if (opts.precompute_m > 0) table = std::make_unique<PrecomputeTable<G>>(inst->seq, opts.precompute_m);
    }
    RhoOptions ro;
    ro.seed = derive_seed(opts.seed, i, kRunTag);
    ro.restart_budget = opts.restart_budget;
    auto res = rho_solve(inst->seq, inst->target.z, ro, table.get());
    if (res.status != SolveStatus::Found) {
      ++failed;
      continue;
    }
    const auto& o = res.outcome;
    acc.add(double(o.collisions), double(o.rho_total), double(o.phi_evals), double(o.group_ops));
  }
}

}  // namespace detail

// Observed averages for one row: curve rows use S = (P_1..P_k), z = P_{k+1};
// class rows use the prime-form sequence S_k, z = [alpha_{k+1}]; GL2 rows
// draw a fresh random S and z per run. Runs are seeded by index.
inline RowResult run_row(const PublishedRow& row, const RowRunOptions& opts) {
  RowResult out{row, row_order(row), {}, std::nullopt, 0};
  out.expected = row_expected(row, out.order.n);
  if (opts.runs == 0) return out;
  const auto t0 = std::chrono::steady_clock::now();
  RunAccumulator acc;
  std::optional<BigInt> ext;
  if (row.external_order) ext = parse_big(*row.external_order);
  AnyGroup any = parse_group(row.descriptor, ext);
  std::visit(
      [&](const auto& grp) {
        using G = std::decay_t<decltype(grp)>;
        if constexpr (std::is_same_v<G, CurveGroup<u64>> || std::is_same_v<G, CurveGroup<BigInt>>) {
          detail::rho_batch<G>([&](std::uint64_t) { return build_curve_sequence(grp, row.k); }, true, opts, acc,
                               out.failed);
        } else if constexpr (std::is_same_v<G, ClassGroup<i128>> || std::is_same_v<G, ClassGroup<BigInt>>) {
          detail::rho_batch<G>([&](std::uint64_t) { return build_class_sequence(grp, row.k); }, true, opts, acc,
                               out.failed);
        } else {
          detail::rho_batch<G>(
              [&](std::uint64_t i) { return build_random_sequence(grp, row.k, derive_seed(opts.seed, i, detail::kSeqTag)); },
              false, opts, acc, out.failed);
        }
      },
      any);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out.failed < opts.runs) out.observed = acc.result(secs);
  return out;
}

// Rows with log2 n above the cap are skipped unless unsafe.
inline double scale_cap_from_env(double fallback = 32.0) {
  if (const char* v = std::getenv("SUBSETPROD_SCALE_CAP")) {
    char* end = nullptr;
    double d = std::strtod(v, &end);
    if (end == v || *end != '\0' || !(d > 0)) throw UsageError(std::string("SUBSETPROD_SCALE_CAP: bad value '") + v + "'");
    return d;
  }
  return fallback;
}

inline std::string csv_header() {
  return "group,log2n,k,d,exp_c,exp_rho,obs_c,obs_rho,runs,failed,n_source,listed_log2n,schema_version";
}

inline std::string fmt(double v, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

inline std::string csv_line(const RowResult& r) {
  const double log2n = log2_big(r.order.n);
  std::string s = "\"" + r.row.label + "\"," + fmt(log2n, 2) + "," + std::to_string(r.row.k) + "," +
                  fmt(double(r.row.k) / log2n, 2) + "," + fmt(r.expected.expected_c, 2) + "," +
                  fmt(std::round(r.expected.expected_rho_tot), 0) + ",";
  if (r.observed) {
    s += fmt(r.observed->mean_c, 2) + "," + fmt(r.observed->mean_rho_tot, 0) + "," + std::to_string(r.observed->runs);
  } else {
    s += ",,0";
  }
  s += "," + std::to_string(r.failed) + "," + to_string(r.order.source) + "," + fmt(r.row.log2n, 2) + "," +
       std::to_string(kSchemaVersion);
  return s;
}

}  // namespace subsetprod::harness
