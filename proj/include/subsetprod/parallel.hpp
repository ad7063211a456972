#pragma once

#include <algorithm>
#include <condition_variable>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "subsetprod/rho.hpp"

namespace subsetprod {

struct DistinguishedRecord {
  Encoding point;           // encoding of the pi-value at the distinguished step
  std::uint64_t walk_seed;  // (epoch << 32) | walk id
  std::uint64_t steps;      // index of that step from the walk start
  unsigned worker_id;       // logical lane

  friend bool operator==(const DistinguishedRecord&, const DistinguishedRecord&) = default;
  friend bool operator<(const DistinguishedRecord& a, const DistinguishedRecord& b) {
    if (a.walk_seed != b.walk_seed) return a.walk_seed < b.walk_seed;
    if (a.steps != b.steps) return a.steps < b.steps;
    if (a.worker_id != b.worker_id) return a.worker_id < b.worker_id;
    return a.point.view() < b.point.view();
  }
};

inline std::uint64_t make_walk_seed(std::uint64_t epoch, std::uint64_t walk_id) { return (epoch << 32) | walk_id; }
inline std::uint64_t walk_epoch(std::uint64_t walk_seed) { return walk_seed >> 32; }
inline std::uint64_t walk_id(std::uint64_t walk_seed) { return walk_seed & 0xffffffffULL; }

// ---------------------------------------------------------------------------
// Checkpoint file: "hex(point) walk_seed steps worker_id" per line.

inline std::string format_record(const DistinguishedRecord& r) {
  return r.point.hex() + " " + std::to_string(r.walk_seed) + " " + std::to_string(r.steps) + " " +
         std::to_string(r.worker_id);
}

inline std::vector<DistinguishedRecord> load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open checkpoint '" + path + "'");
  std::vector<DistinguishedRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string hex, extra;
    unsigned long long seed = 0, steps = 0;
    unsigned worker = 0;
    if (!(ss >> hex >> seed >> steps >> worker) || (ss >> extra)) {
      throw InputError("checkpoint '" + path + "' line " + std::to_string(lineno) + ": malformed record");
    }
    DistinguishedRecord r{Encoding::from_hex(hex), seed, steps, worker};
    out.push_back(std::move(r));
  }
  if (in.bad()) throw InputError("checkpoint '" + path + "': read error");
  return out;
}

// ---------------------------------------------------------------------------
// Fixed set of threads running one batch of lane jobs per round.

class RoundPool {
 public:
  explicit RoundPool(unsigned workers) : workers_(std::max(1u, workers)) {
    for (unsigned w = 1; w < workers_; ++w) threads_.emplace_back([this, w] { loop(w); });
  }
  RoundPool(const RoundPool&) = delete;
  RoundPool& operator=(const RoundPool&) = delete;
  ~RoundPool() {
    {
      std::lock_guard lk(mu_);
      stop_ = true;
      ++generation_;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  unsigned workers() const { return workers_; }

  // job(i) for i in [0, count); worker w takes i = w, w + workers, ...
  void run(std::size_t count, const std::function<void(std::size_t)>& job) {
    if (workers_ == 1) {
      for (std::size_t i = 0; i < count; ++i) job(i);
      return;
    }
    {
      std::lock_guard lk(mu_);
      job_ = &job;
      count_ = count;
      pending_ = workers_ - 1;
      error_ = nullptr;
      ++generation_;
    }
    cv_.notify_all();
    std::exception_ptr err;
    try {
      slice(0);
    } catch (...) {
      err = std::current_exception();
    }
    std::unique_lock lk(mu_);
    done_.wait(lk, [&] { return pending_ == 0; });
    if (!err) err = error_;
    if (err) std::rethrow_exception(err);
  }

 private:
  void slice(unsigned w) {
    for (std::size_t i = w; i < count_; i += workers_) (*job_)(i);
  }

  void loop(unsigned w) {
    std::uint64_t seen = 0;
    for (;;) {
      {
        std::unique_lock lk(mu_);
        cv_.wait(lk, [&] { return generation_ != seen; });
        seen = generation_;
        if (stop_) return;
      }
      std::exception_ptr err;
      try {
        slice(w);
      } catch (...) {
        err = std::current_exception();
      }
      {
        std::lock_guard lk(mu_);
        if (err && !error_) error_ = err;
        --pending_;
      }
      done_.notify_one();
    }
  }

  unsigned workers_;
  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable cv_, done_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t count_ = 0;
  unsigned pending_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

// ---------------------------------------------------------------------------

struct ParallelOptions {
  std::uint64_t seed = 1;
  unsigned workers = 1;
  unsigned lanes = 8;
  std::optional<unsigned> dist_bits;  // default ceil(log2(sqrt n) / 2), or 12
  unsigned alpha = 4;
  std::uint64_t restart_budget = 64;
  std::optional<std::uint64_t> max_epoch_steps;
  EtaMode eta = EtaMode::Keyed;
  u64 multiplier = 96;
  std::optional<std::string> checkpoint_path;
  bool resume = false;
};

struct ParallelResult {
  SolveStatus status = SolveStatus::BudgetExhausted;
  std::optional<Answer> answer;
  CPoint s, t;
  std::uint64_t collisions = 0;
  std::uint64_t rho_total = 0;  // walk steps over all lanes
  std::uint64_t phi_evals = 0;  // walk steps plus replays
  std::uint64_t group_ops = 0;
  std::uint64_t epochs = 0;
  std::uint64_t abandoned = 0;
  unsigned dist_bits = 0;
  std::vector<DistinguishedRecord> records;
};

inline unsigned default_dist_bits(const std::optional<BigInt>& n) {
  if (!n) return 12;
  return unsigned(std::ceil(log2_big(*n) / 4.0));
}

inline bool is_distinguished(const Key128& key, const Encoding& enc, unsigned t) {
  if (t == 0) return true;
  const std::uint64_t h = SipHash::hash(key, enc, 0);
  return (h & ((std::uint64_t(1) << std::min(t, 63u)) - 1)) == 0;
}

namespace detail {

enum class ReplayKind { Useful, Wasted, Merged, SelfNoTail };

template <FiniteGroup G>
struct ReplayOutcome {
  ReplayKind kind;
  CPoint s, t;
  std::optional<Answer> answer;
};

// Both records end on the same pi-value. Walk the two trajectories aligned so
// that they are equally far from it, stopping at the first index where the
// points coincide (the walks merged through eta, or one start lies on the
// other trajectory) or where the pi-values coincide (a usable pair).
template <FiniteGroup G>
ReplayOutcome<G> replay(Walker<G>& walker, std::uint64_t seed, const DistinguishedRecord& r1,
                        const DistinguishedRecord& r2) {
  const auto& seq = walker.seq();
  const DistinguishedRecord& lo = r1.steps <= r2.steps ? r1 : r2;
  const DistinguishedRecord& hi = r1.steps <= r2.steps ? r2 : r1;
  auto start_of = [&](const DistinguishedRecord& r) {
    return walk_start(seed, walk_epoch(r.walk_seed), walk_id(r.walk_seed), seq.size_a(), seq.size_b());
  };
  CPoint a = start_of(lo), b = start_of(hi);
  for (std::uint64_t i = 0; i < hi.steps - lo.steps; ++i) b = walker.phi(b);
  const bool same_walk = lo.walk_seed == hi.walk_seed;
  for (std::uint64_t i = 0; i <= lo.steps; ++i) {
    if (a == b) {
      if (i == 0) return {same_walk ? ReplayKind::SelfNoTail : ReplayKind::Merged, {}, {}, std::nullopt};
      return {ReplayKind::Wasted, {}, {}, std::nullopt};
    }
    const auto pa = walker.value(a);
    const auto pb = walker.value(b);
    if (pa == pb) {
      auto ans = examine_collision(seq, walker.target(), b, a, pb, pa);
      return {ans ? ReplayKind::Useful : ReplayKind::Wasted, b, a, std::move(ans)};
    }
    a = walker.phi(a);
    b = walker.phi(b);
  }
  throw InternalError("replay did not reach the shared distinguished point");
}

}  // namespace detail

// Distinguished-points collision search over a fixed number of logical
// lanes. Each round every lane advances to its next distinguished point;
// records are then merged in lane order and the first match ends the epoch.
// Epoch r uses the same hash key as restart r of rho_solve, and lane 0's
// first walk starts where rho_solve's restart r starts.
template <FiniteGroup G>
ParallelResult rho_solve_parallel(const Sequence<G>& seq, const Element<G>& z, const ParallelOptions& opts = {},
                                  const PrecomputeTable<G>* table = nullptr) {
  if (opts.workers < 1) throw UsageError("workers must be >= 1");
  if (opts.lanes < 1) throw UsageError("lanes must be >= 1");
  const auto& group = seq.group();
  ParallelResult res;
  const unsigned t = opts.dist_bits.value_or(default_dist_bits(group.order()));
  if (t > 40) throw UsageError("dist-bits above 40");
  res.dist_bits = t;
  const std::uint64_t abandon_after = std::uint64_t(1) << std::min(t + opts.alpha, 62u);
  std::uint64_t epoch_cap = opts.max_epoch_steps.value_or(0);
  if (!opts.max_epoch_steps) {
    double root = group.order() ? std::sqrt(static_cast<double>(*group.order())) : std::exp2(40);
    epoch_cap = std::uint64_t(std::min(1e18, 64 * root + 16.0 * opts.lanes * double(abandon_after)));
  }

  const unsigned L = opts.lanes;
  std::uint64_t first_epoch = 0;
  std::vector<DistinguishedRecord> loaded;
  std::vector<std::uint64_t> next_j(L, 0);
  if (opts.resume && opts.checkpoint_path) {
    std::ifstream probe(*opts.checkpoint_path);
    if (probe) {
      loaded = load_checkpoint(*opts.checkpoint_path);
      for (const auto& r : loaded) first_epoch = std::max(first_epoch, walk_epoch(r.walk_seed));
      std::erase_if(loaded, [&](const auto& r) { return walk_epoch(r.walk_seed) != first_epoch; });
      for (const auto& r : loaded) {
        const std::uint64_t id = walk_id(r.walk_seed);
        if (r.worker_id >= L || id % L != r.worker_id) {
          throw InputError("checkpoint record does not match " + std::to_string(L) + " lanes: " + format_record(r));
        }
        group.decode(r.point);
        next_j[r.worker_id] = std::max(next_j[r.worker_id], id / L + 1);
      }
    }
  }
  std::ofstream ckpt;
  if (opts.checkpoint_path) {
    ckpt.open(*opts.checkpoint_path, opts.resume ? std::ios::app : std::ios::trunc);
    if (!ckpt) throw InputError("cannot write checkpoint '" + *opts.checkpoint_path + "'");
  }

  RoundPool pool(opts.workers);
  for (std::uint64_t epoch = first_epoch; epoch < opts.restart_budget; ++epoch) {
    ++res.epochs;
    const EtaSpec spec{opts.eta, walk_key(opts.seed, epoch), opts.multiplier};

    struct Lane {
      std::uint64_t j = 0;
      std::uint64_t seed = 0;
      CPoint cur;
      std::uint64_t steps = 0;
      std::uint64_t since_dp = 0;
      std::optional<DistinguishedRecord> out;
      std::uint64_t abandoned = 0;
      std::uint64_t walked = 0;
    };
    std::vector<Lane> lanes(L);
    std::vector<Walker<G>> walkers;
    walkers.reserve(L);
    for (unsigned l = 0; l < L; ++l) walkers.emplace_back(seq, z, spec, table);
    Walker<G> replayer(seq, z, spec, table);

    auto begin_walk = [&](unsigned l, std::uint64_t j) {
      Lane& ln = lanes[l];
      ln.j = j;
      const std::uint64_t id = l + std::uint64_t(L) * j;
      if (id > 0xffffffffULL) throw CapabilityError("walk id space exhausted");
      ln.seed = make_walk_seed(epoch, id);
      ln.cur = walk_start(opts.seed, epoch, id, seq.size_a(), seq.size_b());
      ln.steps = 0;
      ln.since_dp = 0;
    };
    for (unsigned l = 0; l < L; ++l) begin_walk(l, epoch == first_epoch ? next_j[l] : 0);

    std::unordered_map<Encoding, DistinguishedRecord> seen;
    if (epoch == first_epoch) {
      for (auto& r : loaded) seen.emplace(r.point, r);
    }

    const std::uint64_t per_round_cap = std::max<std::uint64_t>(1, epoch_cap / L);
    auto advance = [&](std::size_t l) {
      Lane& ln = lanes[l];
      Walker<G>& wk = walkers[l];
      ln.out.reset();
      Encoding enc;
      for (std::uint64_t guard = 0; guard < per_round_cap; ++guard) {
        CPoint next = wk.phi(ln.cur, enc);
        ++ln.walked;
        if (is_distinguished(spec.key, enc, t)) {
          ln.out = DistinguishedRecord{enc, ln.seed, ln.steps, unsigned(l)};
          ln.cur = next;
          ++ln.steps;
          ln.since_dp = 0;
          return;
        }
        ln.cur = next;
        ++ln.steps;
        if (++ln.since_dp >= abandon_after) {
          ++ln.abandoned;
          begin_walk(unsigned(l), ln.j + 1);
        }
      }
    };

    bool epoch_done = false;
    std::uint64_t epoch_steps = 0;
    while (!epoch_done) {
      pool.run(L, advance);
      epoch_steps = 0;
      for (const auto& ln : lanes) epoch_steps += ln.walked;
      for (unsigned l = 0; l < L && !epoch_done; ++l) {
        if (!lanes[l].out) continue;
        const DistinguishedRecord rec = *lanes[l].out;
        auto it = seen.find(rec.point);
        if (it == seen.end()) {
          seen.emplace(rec.point, rec);
          res.records.push_back(rec);
          if (ckpt.is_open()) ckpt << format_record(rec) << '\n' << std::flush;
          continue;
        }
        auto rp = detail::replay(replayer, opts.seed, it->second, rec);
        switch (rp.kind) {
          case detail::ReplayKind::Merged:
            // the newer walk started on the other's trajectory
            ++lanes[l].abandoned;
            begin_walk(l, lanes[l].j + 1);
            break;
          case detail::ReplayKind::SelfNoTail:
            epoch_done = true;
            break;
          case detail::ReplayKind::Wasted:
            ++res.collisions;
            res.s = rp.s;
            res.t = rp.t;
            epoch_done = true;
            break;
          case detail::ReplayKind::Useful:
            ++res.collisions;
            res.s = rp.s;
            res.t = rp.t;
            res.answer = std::move(rp.answer);
            res.status = SolveStatus::Found;
            epoch_done = true;
            break;
        }
      }
      if (!epoch_done && epoch_steps >= epoch_cap) epoch_done = true;
    }
    res.rho_total += epoch_steps;
    for (auto& w : walkers) {
      res.phi_evals += w.ops().phi_evals;
      res.group_ops += w.ops().group_ops;
    }
    res.phi_evals += replayer.ops().phi_evals;
    res.group_ops += replayer.ops().group_ops;
    for (const auto& ln : lanes) res.abandoned += ln.abandoned;
    if (res.status == SolveStatus::Found) break;
  }
  return res;
}

}  // namespace subsetprod
