#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "oracle.hpp"
#include "subsetprod/descriptor.hpp"
#include "subsetprod/parallel.hpp"

using namespace subsetprod;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("subsetprod_" + name + "_" + std::to_string(::getpid()))).string();
}

Instance<CurveGroup<u64>> curve_instance(std::size_t k) {
  return build_curve_sequence(CurveGroup<u64>(1048583, BigInt(1048713)), k);
}

std::vector<DistinguishedRecord> sorted(std::vector<DistinguishedRecord> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Parallel, WalkSeedLayout) {
  const auto s = make_walk_seed(3, 17);
  EXPECT_EQ(walk_epoch(s), 3u);
  EXPECT_EQ(walk_id(s), 17u);
  EXPECT_EQ(s, (std::uint64_t(3) << 32) | 17);
}

TEST(Parallel, DefaultDistBits) {
  EXPECT_EQ(default_dist_bits(BigInt(1) << 20), 5u);
  EXPECT_EQ(default_dist_bits(BigInt(1048713)), 6u);
  EXPECT_EQ(default_dist_bits(BigInt(1) << 80), 20u);
  EXPECT_EQ(default_dist_bits(std::nullopt), 12u);
}

TEST(Parallel, DistinguishedFraction) {
  const Key128 key{1, 2};
  int hits = 0;
  const int trials = 1 << 16;
  for (int i = 0; i < trials; ++i) {
    Encoding e;
    e.append_le(u64(i), 4);
    hits += is_distinguished(key, e, 4);
    EXPECT_TRUE(is_distinguished(key, e, 0));
  }
  EXPECT_NEAR(double(hits) / trials, 1.0 / 16, 0.005);
}

TEST(Parallel, RoundPoolRunsEveryJobOnce) {
  for (unsigned w : {1u, 3u, 8u}) {
    RoundPool pool(w);
    for (int round = 0; round < 5; ++round) {
      std::vector<std::atomic<int>> hits(37);
      pool.run(hits.size(), [&](std::size_t i) { hits[i]++; });
      for (auto& h : hits) EXPECT_EQ(h.load(), 1);
    }
  }
}

TEST(Parallel, WorkerCountDoesNotChangeResult) {
  auto inst = curve_instance(60);
  ParallelOptions o;
  o.seed = 7;
  std::optional<ParallelResult> ref;
  for (unsigned w : {1u, 2u, 8u}) {
    o.workers = w;
    auto r = rho_solve_parallel(inst.seq, inst.target.z, o);
    ASSERT_EQ(r.status, SolveStatus::Found) << w;
    EXPECT_EQ(subset_product(inst.seq, r.answer->subset), inst.target.z);
    if (!ref) {
      ref = r;
      continue;
    }
    EXPECT_TRUE(r.answer->subset == ref->answer->subset);
    EXPECT_EQ(r.collisions, ref->collisions);
    EXPECT_EQ(r.rho_total, ref->rho_total);
    EXPECT_TRUE(sorted(r.records) == sorted(ref->records));
  }
}

TEST(Parallel, OneLaneEveryPointMatchesSerialRho) {
  auto inst = curve_instance(40);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RhoOptions ro;
    ro.seed = seed;
    auto serial = rho_solve(inst.seq, inst.target.z, ro);
    ParallelOptions po;
    po.seed = seed;
    po.lanes = 1;
    po.dist_bits = 0;
    auto par = rho_solve_parallel(inst.seq, inst.target.z, po);
    ASSERT_EQ(serial.status, SolveStatus::Found);
    ASSERT_EQ(par.status, SolveStatus::Found);
    EXPECT_TRUE(par.answer->subset == serial.answer->subset) << seed;
    EXPECT_EQ(par.collisions, serial.outcome.collisions) << seed;
  }
}

TEST(Parallel, AnswersVerifyOnSmallGroups) {
  std::mt19937_64 rng(5);
  int found = 0;
  for (int t = 0; t < 60; ++t) {
    auto run = [&](const auto& group) {
      auto inst = oracle::small_instance(group, 10 + rng() % 7, rng);
      ParallelOptions o;
      o.seed = rng();
      o.workers = 2;
      auto r = rho_solve_parallel(inst.seq, inst.target.z, o);
      if (r.answer) {
        ++found;
        EXPECT_TRUE(oracle::represents(group, inst.seq.elements(), r.answer->subset, inst.target.z));
      }
    };
    if (t % 2) {
      run(ZnGroup(100 + rng() % 2000));
    } else {
      run(GL2Group(5));
    }
  }
  EXPECT_GT(found, 20);
}

TEST(Parallel, UnrepresentableExhaustsBudget) {
  ZnGroup g(4096);
  std::vector<ZnGroup::element_type> e;
  for (u64 v = 1; v <= 12; ++v) e.push_back(g.make(2 * v));
  Sequence<ZnGroup> s(g, e);
  ParallelOptions o;
  o.restart_budget = 3;
  auto r = rho_solve_parallel(s, g.make(1), o);
  EXPECT_EQ(r.status, SolveStatus::BudgetExhausted);
  EXPECT_EQ(r.epochs, 3u);
}

TEST(Parallel, CheckpointWriteAndResume) {
  auto inst = curve_instance(60);
  const std::string path = temp_path("ckpt");
  ParallelOptions o;
  o.seed = 3;
  o.checkpoint_path = path;
  auto first = rho_solve_parallel(inst.seq, inst.target.z, o);
  ASSERT_EQ(first.status, SolveStatus::Found);
  auto loaded = load_checkpoint(path);
  EXPECT_FALSE(loaded.empty());
  for (const auto& r : loaded) {
    EXPECT_EQ(walk_id(r.walk_seed) % o.lanes, r.worker_id);
    EXPECT_NO_THROW(inst.seq.group().decode(r.point));
  }
  o.resume = true;
  auto again = rho_solve_parallel(inst.seq, inst.target.z, o);
  ASSERT_EQ(again.status, SolveStatus::Found);
  EXPECT_EQ(subset_product(inst.seq, again.answer->subset), inst.target.z);
  std::filesystem::remove(path);
}

TEST(Parallel, CorruptCheckpointIsInputError) {
  auto inst = curve_instance(60);
  const std::string path = temp_path("bad");
  ParallelOptions o;
  o.checkpoint_path = path;
  o.resume = true;
  for (const char* text : {"zz 1 2 3\n", "0011 1 2\n", "0011 1 2 3 4\n", "abc 1 2 3\n", "00 1 notanumber 0\n", "00 1 2 1\n"}) {
    std::ofstream(path) << text;
    EXPECT_THROW(rho_solve_parallel(inst.seq, inst.target.z, o), InputError) << text;
  }
  // a record whose lane does not match the walk id
  std::ofstream(path) << "0011 9 2 3\n";
  EXPECT_THROW(rho_solve_parallel(inst.seq, inst.target.z, o), InputError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_checkpoint(path), InputError);
}

TEST(Parallel, RecordFormatRoundTrip) {
  const std::string path = temp_path("fmt");
  Encoding e = Encoding::from_hex("00ff10");
  DistinguishedRecord r{e, make_walk_seed(2, 9), 123, 1};
  std::ofstream(path) << format_record(r) << "\n\n";
  auto back = load_checkpoint(path);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_TRUE(back[0] == r);
  std::filesystem::remove(path);
}

TEST(Parallel, OptionErrors) {
  auto inst = curve_instance(40);
  ParallelOptions o;
  o.workers = 0;
  EXPECT_THROW(rho_solve_parallel(inst.seq, inst.target.z, o), UsageError);
  o.workers = 1;
  o.lanes = 0;
  EXPECT_THROW(rho_solve_parallel(inst.seq, inst.target.z, o), UsageError);
}
