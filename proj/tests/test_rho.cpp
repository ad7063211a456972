#include <gtest/gtest.h>

#include <map>

#include "oracle.hpp"
#include "subsetprod/descriptor.hpp"
#include "subsetprod/rho.hpp"

using namespace subsetprod;

namespace {

EtaSpec toy_spec() { return EtaSpec{EtaMode::ToyLinear, {}, 96}; }

// Brute-force rho shape: index of first repeat and period.
template <FiniteGroup G>
std::pair<std::uint64_t, std::uint64_t> rho_shape(Walker<G>& w, CPoint x, std::vector<CPoint>& path) {
  std::map<std::string, std::uint64_t> seen;
  for (std::uint64_t i = 0;; ++i) {
    const std::string key = format_mask(x);
    if (auto it = seen.find(key); it != seen.end()) return {it->second, i - it->second};
    seen.emplace(key, i);
    path.push_back(x);
    x = w.phi(x);
  }
}

CurveGroup<u64> curve20() { return CurveGroup<u64>(1048583, BigInt(1048713)); }

}  // namespace

TEST(Eta, ToyExamples) {
  auto inst = build_toy_instance();
  const auto& g = inst.seq.group();
  EXPECT_EQ(format_mask(eta(toy_spec(), g.make(97), inst.seq)), "A{3,5}");
  EXPECT_EQ(format_mask(eta(toy_spec(), g.make(16), inst.seq)), "B{4,5}");
  EXPECT_EQ(format_mask(eta(toy_spec(), g.make(0), inst.seq)), "B{}");
}

TEST(Eta, ToyModeRestrictions) {
  auto odd = build_random_sequence(ZnGroup(127), 11, 1);
  EXPECT_THROW(Walker<ZnGroup>(odd.seq, odd.target.z, toy_spec()), UsageError);
  auto gl = build_random_sequence(GL2Group(5), 12, 1);
  EXPECT_THROW(Walker<GL2Group>(gl.seq, gl.target.z, toy_spec()), UsageError);
}

TEST(Eta, KeyedIsDeterministicAndKeyed) {
  auto inst = build_curve_sequence(curve20(), 61);
  const auto& s = inst.seq;
  const auto& E = s.group();
  Rng rng(3);
  int side_a = 0, differ = 0;
  const int trials = 2000;
  for (int i = 0; i < trials; ++i) {
    auto P = E.random_element(rng);
    EtaSpec k1{EtaMode::Keyed, walk_key(1, 0), 96};
    EtaSpec k2{EtaMode::Keyed, walk_key(2, 0), 96};
    auto c = eta(k1, P, s);
    EXPECT_TRUE(c == eta(k1, P, s));
    EXPECT_EQ(c.bits.size(), s.half_size(c.side));
    side_a += c.side == Side::A;
    differ += !(c == eta(k2, P, s));
  }
  EXPECT_NEAR(double(side_a) / trials, 0.5, 0.05);
  EXPECT_EQ(differ, trials);
}

TEST(Eta, KeyedMaskBitsLookUniform) {
  auto inst = build_random_sequence(ZnGroup(1u << 30), 200, 1);
  const auto& s = inst.seq;
  std::vector<int> ones(100, 0);
  const int trials = 4000;
  for (int i = 0; i < trials; ++i) {
    auto c = eta(EtaSpec{EtaMode::Keyed, walk_key(5, 0), 96}, s.group().make(u64(i) * 7919), s);
    for (std::size_t j = 0; j < 100; ++j) ones[j] += c.bits.test(j);
  }
  for (int n : ones) EXPECT_NEAR(double(n) / trials, 0.5, 0.04);
}

TEST(Walk, ToyOrbit) {
  auto inst = build_toy_instance();
  Walker<ZnGroup> w(inst.seq, inst.target.z, toy_spec());
  const std::pair<const char*, u64> orbit[] = {
      {"B{1,2,3,6}", 97}, {"A{3,5}", 16},  {"B{4,5}", 62},  {"B{1,2,4,5,6}", 28},     {"A{2,4}", 90},
      {"B{5}", 52},       {"A{1,2,5}", 1}, {"B{1,2}", 99},  {"B{1,2,4,6}", 105},      {"A{1,2,3,5}", 28},
  };
  CPoint c = parse_mask("B:1,2,3,6", 6, 6);
  for (auto [mask, v] : orbit) {
    EXPECT_EQ(format_mask(c), mask);
    EXPECT_EQ(w.value(c).value, v);
    c = w.phi(c);
  }
  EXPECT_EQ(format_mask(c), "A{2,4}");
}

TEST(Walk, ToyFloyd) {
  auto inst = build_toy_instance();
  Walker<ZnGroup> w(inst.seq, inst.target.z, toy_spec());
  auto f = floyd_collide(w, parse_mask("B:1,2,3,6", 6, 6));
  EXPECT_EQ(f.tail, 4u);
  EXPECT_EQ(f.cycle, 6u);
  EXPECT_EQ(format_mask(f.s), "A{1,2,3,5}");
  EXPECT_EQ(format_mask(f.t), "B{1,2,4,5,6}");
}

TEST(Walk, FloydMatchesBruteForce) {
  int with_tail = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto inst = build_random_sequence(ZnGroup(5003), 14, seed);
    const EtaSpec spec{EtaMode::Keyed, walk_key(seed, 0), 96};
    Walker<ZnGroup> w1(inst.seq, inst.target.z, spec), w2(inst.seq, inst.target.z, spec);
    const CPoint start = walk_start(seed, 0, 0, inst.seq.size_a(), inst.seq.size_b());
    std::vector<CPoint> path;
    auto [mu, lambda] = rho_shape(w1, start, path);
    auto f = floyd_collide(w2, start);
    EXPECT_EQ(f.tail, mu);
    EXPECT_EQ(f.cycle, lambda);
    if (mu == 0) continue;
    ++with_tail;
    EXPECT_TRUE(f.t == path[mu - 1]);
    EXPECT_TRUE(f.s == path[mu + lambda - 1]);
    EXPECT_FALSE(f.s == f.t);
    EXPECT_TRUE(w1.phi(f.s) == w1.phi(f.t));
  }
  EXPECT_GT(with_tail, 30);
}

TEST(Precompute, ToyTable) {
  auto inst = build_toy_instance();
  PrecomputeTable<ZnGroup> t(inst.seq, 3);
  EXPECT_EQ(t.entries(), 32u);
  EXPECT_EQ(t.blocks(Side::A), 2u);
  EXPECT_EQ(t.entry(Side::A, 0, 0b101).value, 30u);   // 3 + 27
  EXPECT_EQ(t.entry(Side::B, 0, 0b101).value, 124u);  // -5 - 125
  EXPECT_EQ(t.entry(Side::A, 1, 0b111).value, (81u + 116 + 94) % 127);
  EXPECT_EQ(PrecomputeTable<ZnGroup>::entries_for(7, 7, 3), 36u);
  EXPECT_THROW(PrecomputeTable<ZnGroup>(inst.seq, 0), UsageError);
  EXPECT_THROW(PrecomputeTable<ZnGroup>(inst.seq, 6, 100), CapabilityError);
}

TEST(Precompute, ValuesMatchDirectProducts) {
  GL2Group g(101);
  auto inst = build_random_sequence(g, 37, 2);
  const auto& s = inst.seq;
  Rng rng(8);
  for (std::size_t m : {1u, 4u, 7u, 19u}) {
    PrecomputeTable<GL2Group> t(s, m);
    for (int i = 0; i < 50; ++i) {
      CPoint c = random_cpoint(s.size_a(), s.size_b(), rng);
      OpCounter ops;
      const auto expect = c.side == Side::A ? product(s, c) : mu_product(s, c, inst.target.z);
      EXPECT_TRUE(t.value(g, inst.target.z, c, ops) == expect) << m;
    }
  }
}

TEST(Precompute, TrajectoriesIdentical) {
  auto inst = build_curve_sequence(curve20(), 60);
  const EtaSpec spec{EtaMode::Keyed, walk_key(3, 0), 96};
  PrecomputeTable<CurveGroup<u64>> t5(inst.seq, 5), t8(inst.seq, 8);
  Walker<CurveGroup<u64>> plain(inst.seq, inst.target.z, spec), w5(inst.seq, inst.target.z, spec, &t5),
      w8(inst.seq, inst.target.z, spec, &t8);
  CPoint a = walk_start(3, 0, 0, 30, 30), b = a, c = a;
  for (int i = 0; i < 500; ++i) {
    a = plain.phi(a);
    b = w5.phi(b);
    c = w8.phi(c);
    ASSERT_TRUE(a == b && a == c) << i;
  }
}

TEST(Precompute, OpsPerStep) {
  auto run = [](std::size_t k, std::size_t m) {
    auto inst = build_curve_sequence(curve20(), k);
    std::unique_ptr<PrecomputeTable<CurveGroup<u64>>> t;
    if (m) t = std::make_unique<PrecomputeTable<CurveGroup<u64>>>(inst.seq, m);
    Walker<CurveGroup<u64>> w(inst.seq, inst.target.z, EtaSpec{EtaMode::Keyed, walk_key(1, 0), 96}, t.get());
    CPoint c = walk_start(1, 0, 0, inst.seq.size_a(), inst.seq.size_b());
    std::uint64_t worst = 0;
    for (int i = 0; i < 2000; ++i) {
      const auto before = w.ops().group_ops;
      c = w.phi(c);
      worst = std::max(worst, w.ops().group_ops - before);
    }
    return std::pair{double(w.ops().group_ops) / double(w.ops().phi_evals), worst};
  };
  auto [plain, plain_worst] = run(60, 0);
  EXPECT_NEAR(plain, 15.0, 1.0);
  auto [m5, m5_worst] = run(60, 5);
  EXPECT_LE(m5_worst, 7u);
  EXPECT_LE(m5, 7.0);
  auto [m10, m10_worst] = run(100, 10);
  EXPECT_LE(m10_worst, 5u);
  (void)plain_worst;
  (void)m10;
}

TEST(Rho, ToySolve) {
  auto inst = build_toy_instance();
  RhoOptions o;
  o.eta = EtaMode::ToyLinear;
  o.start = parse_mask("B:1,2,3,6", 6, 6);
  auto r = rho_solve(inst.seq, inst.target.z, o);
  ASSERT_EQ(r.status, SolveStatus::Found);
  EXPECT_EQ(r.outcome.collisions, 1u);
  EXPECT_EQ(r.outcome.rho_total, 10u);
  EXPECT_EQ(to_hex(r.answer->subset), "eb7");
}

TEST(Rho, AnswersVerifyAgainstOracle) {
  std::mt19937_64 rng(11);
  int found = 0;
  for (int t = 0; t < 120; ++t) {
    const std::size_t k = 8 + rng() % 9;
    auto run = [&](const auto& group) {
      auto inst = oracle::small_instance(group, k, rng);
      RhoOptions o;
      o.seed = rng();
      auto r = rho_solve(inst.seq, inst.target.z, o);
      if (r.answer) {
        ++found;
        EXPECT_TRUE(oracle::represents(group, inst.seq.elements(), r.answer->subset, inst.target.z));
      } else {
        EXPECT_EQ(r.status, SolveStatus::BudgetExhausted);
      }
    };
    if (t % 2) {
      run(ZnGroup(64 + rng() % 1000));
    } else {
      run(GL2Group(3));
    }
  }
  EXPECT_GT(found, 40);
}

TEST(Rho, DeterministicAndTableInvariant) {
  auto inst = build_curve_sequence(curve20(), 40);
  PrecomputeTable<CurveGroup<u64>> t(inst.seq, 8);
  RhoOptions o;
  o.seed = 42;
  auto a = rho_solve(inst.seq, inst.target.z, o);
  auto b = rho_solve(inst.seq, inst.target.z, o);
  auto c = rho_solve(inst.seq, inst.target.z, o, &t);
  ASSERT_EQ(a.status, SolveStatus::Found);
  for (const auto* r : {&b, &c}) {
    EXPECT_EQ(r->outcome.collisions, a.outcome.collisions);
    EXPECT_EQ(r->outcome.rho_total, a.outcome.rho_total);
    EXPECT_EQ(r->outcome.phi_evals, a.outcome.phi_evals);
    EXPECT_TRUE(r->answer->subset == a.answer->subset);
  }
  EXPECT_EQ(b.outcome.group_ops, a.outcome.group_ops);
  EXPECT_LT(c.outcome.group_ops, a.outcome.group_ops);
}

TEST(Rho, BudgetExhaustedWhenUnrepresentable) {
  ZnGroup g(1000);
  std::vector<ZnGroup::element_type> e;
  for (u64 v : {2, 4, 6, 8, 10, 12, 14, 16}) e.push_back(g.make(v));
  Sequence<ZnGroup> s(g, e);
  RhoOptions o;
  o.restart_budget = 10;
  auto r = rho_solve(s, g.make(1), o);
  EXPECT_EQ(r.status, SolveStatus::BudgetExhausted);
  EXPECT_FALSE(r.answer.has_value());
  EXPECT_LE(r.outcome.collisions, 10u);
}

TEST(Rho, WalkStartsAreSeeded) {
  EXPECT_TRUE(walk_start(1, 0, 0, 20, 20) == walk_start(1, 0, 0, 20, 20));
  EXPECT_FALSE(walk_start(1, 0, 0, 20, 20) == walk_start(1, 1, 0, 20, 20));
  EXPECT_FALSE(walk_start(1, 0, 0, 20, 20) == walk_start(1, 0, 1, 20, 20));
  EXPECT_FALSE(walk_key(1, 0) == walk_key(1, 1));
  Rng rng(1);
  int a = 0;
  for (int i = 0; i < 4000; ++i) a += random_cpoint(3, 1, rng).side == Side::A;
  EXPECT_NEAR(a / 4000.0, 0.8, 0.03);
}

TEST(SipHash, ReferenceVectors) {
  const Key128 key{0x0706050403020100ULL, 0x0f0e0d0c0b0a0908ULL};
  std::uint8_t msg[64];
  for (int i = 0; i < 64; ++i) msg[i] = std::uint8_t(i);
  EXPECT_EQ(SipHash::hash(key, msg, 0), 0x726fdb47dd0e0e31ULL);
  EXPECT_EQ(SipHash::hash(key, msg, 15), 0xa129ca6149be45e5ULL);
  EXPECT_NE(SipHash::hash(key, msg, 15, 1), SipHash::hash(key, msg, 15));
}
