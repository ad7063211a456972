#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <set>

#include "subsetprod/harness/conjecture.hpp"
#include "subsetprod/harness/experiments.hpp"
#include "subsetprod/harness/run.hpp"
#include "subsetprod/harness/toy.hpp"
#include "subsetprod/harness/verify.hpp"

using namespace subsetprod;
using namespace subsetprod::harness;

TEST(Rows, Catalog) {
  auto rows = published_rows();
  ASSERT_EQ(rows.size(), 54u);
  int curve = 0, cls = 0, gl2 = 0;
  for (const auto& r : rows) {
    curve += r.family == RowFamily::Curve;
    cls += r.family == RowFamily::ClassGroup;
    gl2 += r.family == RowFamily::GL2;
    EXPECT_EQ(r.external_order.has_value(), r.family == RowFamily::ClassGroup) << r.label;
  }
  EXPECT_EQ(curve, 18);
  EXPECT_EQ(cls, 18);
  EXPECT_EQ(gl2, 18);
}

TEST(Rows, OrdersMatchPublishedLog2) {
  for (const auto& r : published_rows()) {
    if (r.family == RowFamily::Curve && r.log2n > 30) continue;  // slow order computation; see groups tests
    const auto o = row_order(r);
    EXPECT_NEAR(log2_big(o.n), r.log2n, 0.005) << r.label;
  }
}

TEST(Rows, ExpectedValuesReproduce) {
  int ok = 0;
  std::vector<std::string> bad;
  for (const auto& r : published_rows()) {
    const auto o = row_order(r);
    const auto m = row_expected(r, o.n);
    const bool pass = std::abs(m.expected_c - r.exp_c) <= 0.01 + 1e-9 && std::abs(m.expected_rho_tot - r.exp_rho) <= 1.0;
    if (pass) {
      ++ok;
    } else {
      bad.push_back(r.label + "/" + std::to_string(r.k));
    }
  }
  EXPECT_EQ(ok, 53);
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0], "Cl(1-2^64)/64");
}

TEST(Rows, RunRowSmoke) {
  auto rows = published_rows();
  RowRunOptions o;
  o.runs = 20;
  auto res = run_row(rows[0], o);
  ASSERT_TRUE(res.observed.has_value());
  EXPECT_EQ(res.observed->runs, 20u);
  EXPECT_EQ(res.failed, 0u);
  EXPECT_GT(res.observed->mean_c, 0.9);
  auto again = run_row(rows[0], o);
  EXPECT_DOUBLE_EQ(again.observed->mean_rho_tot, res.observed->mean_rho_tot);
  const auto line = csv_line(res);
  EXPECT_EQ(line.rfind("\"E/F_{2^20+7}\",20.00,40,2.00,3.00,3144,", 0), 0u) << line;
  EXPECT_NE(line.find(",20,0,computed,20.00,1"), std::string::npos) << line;
  o.runs = 0;
  auto expected_only = run_row(rows[0], o);
  EXPECT_FALSE(expected_only.observed.has_value());
}

TEST(Rows, ScaleCap) {
  ::unsetenv("SUBSETPROD_SCALE_CAP");
  EXPECT_DOUBLE_EQ(scale_cap_from_env(), 32.0);
  ::setenv("SUBSETPROD_SCALE_CAP", "24.5", 1);
  EXPECT_DOUBLE_EQ(scale_cap_from_env(), 24.5);
  ::setenv("SUBSETPROD_SCALE_CAP", "lots", 1);
  EXPECT_THROW(scale_cap_from_env(), UsageError);
  ::unsetenv("SUBSETPROD_SCALE_CAP");
}

TEST(Toy, ReportPasses) {
  auto rep = run_toy();
  EXPECT_TRUE(rep.pass);
  EXPECT_TRUE(rep.compared);
  ASSERT_TRUE(rep.result.answer.has_value());
  EXPECT_EQ(to_hex(rep.result.answer->subset), "eb7");
}

TEST(Toy, OtherMultiplierIsReportedAsMismatch) {
  ToyOptions o;
  o.multiplier = 95;
  auto rep = run_toy(o);
  EXPECT_FALSE(rep.pass);
  EXPECT_TRUE(rep.compared);
  o.expect_paper = false;
  auto free_run = run_toy(o);
  EXPECT_FALSE(free_run.compared);
}

TEST(Verify, PublishedStringsUnderBothOrders) {
  for (const auto& [which, hex, lsb_pop] :
       {std::tuple{"curve80", kPublishedCurve80, 96u}, std::tuple{"class160", kPublishedClass160, 107u}}) {
    auto rep = verify_paper_run(which, hex);
    ASSERT_EQ(rep.lines.size(), 2u);
    EXPECT_EQ(rep.lines[0].order, BitOrder::Msb);
    EXPECT_FALSE(rep.lines[0].match) << which;
    EXPECT_EQ(rep.lines[1].order, BitOrder::Lsb);
    EXPECT_TRUE(rep.lines[1].match) << which;
    EXPECT_EQ(rep.lines[1].popcount, lsb_pop);
    EXPECT_EQ(rep.lines[0].popcount, lsb_pop);
    EXPECT_LT(rep.group_ops, 250u);
  }
  EXPECT_THROW(verify_paper_run("curve80", "abc"), InputError);
  EXPECT_THROW(verify_paper_run("other", kPublishedCurve80), UsageError);
}

TEST(Conjecture, SmallDiscriminants) {
  auto r = scan_discriminant(-23);
  EXPECT_EQ(r.h, 3);
  ASSERT_TRUE(r.minimal_k.has_value());
  EXPECT_EQ(*r.minimal_k, 2);
  EXPECT_EQ(*scan_discriminant(-4).minimal_k, 0);
  EXPECT_EQ(scan_csv_line(r), "-23,3,2,1");
  auto rows = conjecture_scan(-100, -3);
  for (const auto& row : rows) {
    EXPECT_TRUE(is_fundamental_discriminant(row.D));
    ASSERT_TRUE(row.minimal_k.has_value()) << row.D;
  }
  EXPECT_EQ(rows.front().D, -3);
  EXPECT_THROW(conjecture_scan(-10, 5), UsageError);
}

TEST(Conjecture, ClosureIsExact) {
  // minimal k: S_{k-1} misses a class, S_k reaches every class
  for (i64 D : {-47L, -71L, -199L, -1999L}) {
    auto r = scan_discriminant(D);
    ASSERT_TRUE(r.minimal_k.has_value());
    ClassGroup<i128> G(D, BigInt(r.h));
    std::vector<QuadForm<i128>> s;
    for (u64 l = 2; int(s.size()) < *r.minimal_k; l = next_prime(l + 1)) {
      if (auto f = G.prime(l)) s.push_back(*f);
    }
    auto reach = [&](std::size_t k) {
      std::set<std::pair<i128, i128>> out;
      for (std::uint64_t m = 0; m < (std::uint64_t(1) << k); ++m) {
        auto acc = G.identity();
        for (std::size_t i = 0; i < k; ++i) {
          if ((m >> i) & 1) acc = G.op(acc, s[i]);
        }
        out.insert({acc.a, acc.b});
      }
      return i64(out.size());
    };
    if (*r.minimal_k > 22) continue;
    EXPECT_EQ(reach(std::size_t(*r.minimal_k)), r.h) << D;
    EXPECT_LT(reach(std::size_t(*r.minimal_k - 1)), r.h) << D;
  }
}

TEST(Fundamental, Discriminants) {
  for (i64 D : {-3L, -4L, -7L, -8L, -23L, -24L, -84L, -1000003L}) EXPECT_TRUE(is_fundamental_discriminant(D)) << D;
  for (i64 D : {-12L, -16L, -27L, -28L, -99L, -1099511627775L}) EXPECT_FALSE(is_fundamental_discriminant(D)) << D;
}

TEST(Records, ConfigRoundTripAndHash) {
  RunConfig c;
  c.group = "curve:1048583";
  c.k = 60;
  c.dist_bits = 5;
  c.start = "A:1,2";
  const auto j = to_json(c);
  const auto back = config_from_json(j);
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(config_hash(back), config_hash(c));
  RunConfig d = c;
  d.seed = 2;
  EXPECT_NE(config_hash(d), config_hash(c));
  EXPECT_EQ(config_hash(c).size(), 16u);
}

TEST(Records, ResultRoundTripAndTamper) {
  RunConfig c;
  c.group = "zn:127";
  c.seq = "toy";
  c.alg = "rho";
  c.eta = "toy-linear";
  c.start = "B:1,2,3,6";
  auto run = run_solve(c);
  ASSERT_EQ(run.status, SolveStatus::Found);
  auto j = to_json(run.record);
  EXPECT_EQ(j["answer"], "eb7");
  EXPECT_EQ(j["c"], 1);
  EXPECT_EQ(j["rho_tot"], 10);
  EXPECT_EQ(j["verified"], true);
  auto back = record_from_json(j);
  EXPECT_EQ(to_json(back), j);
  auto tampered = j;
  tampered["config"]["seed"] = 99;
  EXPECT_THROW(record_from_json(tampered), InputError);
  auto old = j;
  old["schema_version"] = 0;
  EXPECT_THROW(record_from_json(old), InputError);
  auto missing = j;
  missing.erase("status");
  EXPECT_THROW(record_from_json(missing), InputError);
}

TEST(Run, AlgorithmsAgreeOnVerification) {
  for (const char* alg : {"bsgs", "bsgs-rand", "rho", "rho-parallel"}) {
    RunConfig c;
    c.group = "gl2:5";
    c.seq = "random";
    c.k = 14;
    c.alg = alg;
    c.precompute_m = std::string(alg).rfind("rho", 0) == 0 ? 3 : 0;
    auto run = run_solve(c);
    if (run.status == SolveStatus::Found) {
      EXPECT_TRUE(run.record.verified) << alg;
      ASSERT_TRUE(run.record.answer_hex.has_value());
      EXPECT_EQ(run.record.answer_hex->size(), 4u);
    }
  }
}

TEST(Run, BuildInstanceErrors) {
  RunConfig c;
  c.group = "gl2:37";
  c.seq = "curve";
  c.k = 10;
  EXPECT_THROW(run_solve(c), UsageError);
  c.seq = "toy";
  EXPECT_THROW(run_solve(c), UsageError);
  c.seq = "random";
  c.alg = "magic";
  EXPECT_THROW(run_solve(c), UsageError);
  c.alg = "rho";
  c.bit_order = "middle";
  EXPECT_THROW(run_solve(c), UsageError);
  c.bit_order = "msb";
  c.eta = "weird";
  EXPECT_THROW(run_solve(c), UsageError);
}
