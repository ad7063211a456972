#pragma once

#include <string>
#include <vector>

#include "subsetprod/rho.hpp"

namespace subsetprod::harness {

// The published walk from w = B{1,2,3,6}: node masks and pi-values, and the
// node where it re-enters (index 4).
inline const std::vector<std::pair<std::string, u64>>& toy_published_orbit() {
  static const std::vector<std::pair<std::string, u64>> orbit = {
      {"B{1,2,3,6}", 97}, {"A{3,5}", 16},  {"B{4,5}", 62},     {"B{1,2,4,5,6}", 28}, {"A{2,4}", 90},
      {"B{5}", 52},       {"A{1,2,5}", 1}, {"B{1,2}", 99},     {"B{1,2,4,6}", 105},  {"A{1,2,3,5}", 28},
  };
  return orbit;
}

struct ToyOptions {
  EtaMode eta = EtaMode::ToyLinear;
  u64 multiplier = 96;
  bool expect_paper = true;
  std::uint64_t seed = 1;
};

struct ToyReport {
  bool pass = true;
  bool compared = false;
  std::vector<std::string> lines;
  RhoResult result;
  std::vector<std::pair<std::string, u64>> orbit;
};

inline ToyReport run_toy(const ToyOptions& opt = {}) {
  ToyReport rep;
  auto inst = build_toy_instance();
  const auto& seq = inst.seq;
  const auto z = inst.target.z;
  const CPoint w = parse_mask("B:1,2,3,6", 6, 6);
  auto fail = [&](const std::string& why) {
    rep.pass = false;
    rep.lines.push_back("FAIL " + why);
  };

  RhoOptions ro;
  ro.eta = opt.eta;
  ro.multiplier = opt.multiplier;
  ro.seed = opt.seed;
  ro.start = w;

  if (opt.eta == EtaMode::ToyLinear) {
    Walker<ZnGroup> walker(seq, z, EtaSpec{EtaMode::ToyLinear, {}, opt.multiplier});
    CPoint c = w;
    std::string chain;
    for (int i = 0; i < 11; ++i) {
      const u64 v = walk_value(seq, z, c).value;
      rep.orbit.push_back({format_mask(c), v});
      chain += (i ? " -> " : "") + format_mask(c) + "(" + std::to_string(v) + ")";
      c = walker.phi(c);
    }
    rep.lines.push_back("walk: " + chain);
  }

  const bool compare = opt.eta == EtaMode::ToyLinear && opt.expect_paper;
  if (compare) {
    rep.compared = true;
    const auto& pub = toy_published_orbit();
    for (std::size_t i = 0; i < pub.size(); ++i) {
      if (rep.orbit[i] != pub[i]) {
        fail("node " + std::to_string(i) + " is " + rep.orbit[i].first + "(" + std::to_string(rep.orbit[i].second) +
             "), expected " + pub[i].first + "(" + std::to_string(pub[i].second) + ")");
        break;
      }
    }
    if (rep.orbit[10] != pub[4]) fail("walk does not re-enter at " + pub[4].first);
  }

  rep.result = rho_solve(seq, z, ro);
  const auto& o = rep.result.outcome;
  rep.lines.push_back("tail " + std::to_string(o.tail) + ", cycle " + std::to_string(o.cycle) + ", s = " +
                      format_mask(o.s) + ", t = " + format_mask(o.t) + ", c = " + std::to_string(o.collisions) +
                      ", rho = " + std::to_string(o.rho_total));

  if (!rep.result.answer) {
    fail("no representation found");
    return rep;
  }
  const auto& ans = *rep.result.answer;
  std::string terms;
  u64 plain_sum = 0;
  u64 pw = 1;
  for (std::size_t i = 0; i < 12; ++i) {
    const u64 base = i < 6 ? 3 : 5;
    if (i == 0 || i == 6) pw = 1;
    pw *= base;
    if (!ans.subset.test(i)) continue;
    terms += (terms.empty() ? "" : "+") + std::to_string(pw);
    plain_sum += pw;
  }
  rep.lines.push_back("answer " + format_mask(ans.x) + " " + format_mask(ans.y) + ": 2 = " + terms + " (mod 127), sum " +
                      std::to_string(plain_sum) + " = " + std::to_string(plain_sum % 127) + " (mod 127)");
  if (plain_sum % 127 != 2) fail("answer does not sum to 2 mod 127");

  if (!compare) return rep;
  if (o.tail != 4 || o.cycle != 6) fail("expected tail 4 and cycle 6");
  if (format_mask(o.s) != "A{1,2,3,5}" || format_mask(o.t) != "B{1,2,4,5,6}") {
    fail("expected s = A{1,2,3,5}, t = B{1,2,4,5,6}");
  }
  if (walk_value(seq, z, o.s).value != 28 || walk_value(seq, z, o.t).value != 28) fail("collision value is not 28");
  if (o.collisions != 1 || o.rho_total != 10) fail("expected c = 1, rho = 10");
  if (format_mask(ans.x) != "A{1,2,3,5}" || format_mask(ans.y) != "B{1,2,4,5,6}") fail("answer differs from the published one");
  return rep;
}

}  // namespace subsetprod::harness
