#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "subsetprod/groups/classgroup.hpp"

namespace subsetprod::harness {

inline constexpr i64 kClosureCap = 10000000;

struct ScanRow {
  i64 D = 0;
  i64 h = 0;
  std::optional<int> minimal_k;  // nullopt: not represented within the k limit
};

// Smallest k such that every class is a subsequence product of S_k, found by
// growing the reachable set R <- R u R.[alpha_k]. Searches k up to
// max(1, ceil(d_max log2 h)).
inline ScanRow scan_discriminant(i64 D, double d_max = 4.0) {
  auto forms = reduced_forms(D);
  ScanRow row{D, i64(forms.size()), std::nullopt};
  if (row.h > kClosureCap) throw CapabilityError("class number above the closure cap");
  if (row.h == 1) {
    row.minimal_k = 0;
    return row;
  }
  auto key = [](const QuadForm<i64>& f) { return (std::uint64_t(f.a) << 32) ^ std::uint64_t(std::uint32_t(f.b)); };
  std::unordered_map<std::uint64_t, std::size_t> index;
  index.reserve(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i) index.emplace(key(forms[i]), i);

  const int k_limit = std::max(1, int(std::ceil(d_max * std::log2(double(row.h)))));
  std::vector<char> in(forms.size(), 0);
  std::vector<std::size_t> members;
  const auto id = index.at(key(principal_form<i64>(D)));
  in[id] = 1;
  members.push_back(id);
  int k = 0;
  for (u64 l = 2; k < k_limit; l = next_prime(l + 1)) {
    auto p = prime_form<i64>(l, D);
    if (!p) continue;
    const auto alpha = reduce_form(*p);
    ++k;
    const std::size_t before = members.size();
    for (std::size_t i = 0; i < before; ++i) {
      const auto g = compose_forms(forms[members[i]], alpha);
      const auto j = index.at(key(g));
      if (!in[j]) {
        in[j] = 1;
        members.push_back(j);
      }
    }
    if (i64(members.size()) == row.h) {
      row.minimal_k = k;
      break;
    }
  }
  return row;
}

inline std::vector<ScanRow> conjecture_scan(i64 d_lo, i64 d_hi, bool fundamental_only = true, double d_max = 4.0) {
  if (d_lo > d_hi) std::swap(d_lo, d_hi);
  if (d_hi >= 0) throw UsageError("conjecture-scan: discriminants must be negative");
  std::vector<ScanRow> rows;
  for (i64 D = d_hi; D >= d_lo; --D) {
    const i64 r = pos_mod<i64>(D, 4);
    if (r != 0 && r != 1) continue;
    if (fundamental_only && !is_fundamental_discriminant(D)) continue;
    rows.push_back(scan_discriminant(D, d_max));
  }
  return rows;
}

inline std::string scan_csv_header() { return "D,h,minimal_k,schema_version"; }

inline std::string scan_csv_line(const ScanRow& r, int schema_version = 1) {
  return std::to_string(r.D) + "," + std::to_string(r.h) + "," + (r.minimal_k ? std::to_string(*r.minimal_k) : "") +
         "," + std::to_string(schema_version);
}

}  // namespace subsetprod::harness
