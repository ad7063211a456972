#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subsetprod/harness/conjecture.hpp"
#include "subsetprod/harness/experiments.hpp"
#include "subsetprod/harness/run.hpp"
#include "subsetprod/harness/toy.hpp"
#include "subsetprod/harness/verify.hpp"

using namespace subsetprod;
using namespace subsetprod::harness;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kNotFound = 3, kCapability = 4 };

std::ofstream open_out(const std::string& path, bool append) {
  std::ofstream f(path, append ? std::ios::app : std::ios::trunc);
  if (!f) throw InputError("cannot write '" + path + "'");
  return f;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

// desk = the rows small enough for routine reproduction
bool row_selected(const PublishedRow& r, const std::vector<std::string>& sel) {
  for (const auto& s : sel) {
    if (s == "all") return true;
    if (s == "desk" && (r.descriptor == "curve:1048583" || r.descriptor == "cl:-1099511627775" ||
                        r.descriptor == "gl2:37")) {
      return true;
    }
    if (s == r.label || s == r.descriptor || s == r.label + "/" + std::to_string(r.k) ||
        s == r.descriptor + "/" + std::to_string(r.k)) {
      return true;
    }
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Short product representations in generic groups: BSGS and Pollard-rho"};
  app.require_subcommand(1);

  // solve
  RunConfig cfg;
  std::string out_path;
  auto* solve = app.add_subcommand("solve", "Solve one instance and emit a JSON-lines record");
  solve->add_option("--group", cfg.group, "zn:<n> | curve:<p> | cl:<D> | gl2:<p>")->required();
  solve->add_option("--order", cfg.order, "group order, when it cannot be computed");
  solve->add_option("--seq", cfg.seq, "auto | toy | curve | class | class-desc | random")->capture_default_str();
  solve->add_option("--k", cfg.k, "sequence length");
  solve->add_option("--seq-seed", cfg.seq_seed, "seed for random sequences")->capture_default_str();
  solve->add_option("--alg", cfg.alg, "bsgs | bsgs-rand | rho | rho-parallel")->capture_default_str();
  solve->add_option("--eta", cfg.eta, "keyed-hash | toy-linear")->capture_default_str();
  solve->add_option("--start", cfg.start, "first walk point, e.g. B:1,2,3,6");
  solve->add_option("--workers", cfg.workers, "threads for rho-parallel")->capture_default_str();
  solve->add_option("--lanes", cfg.lanes, "logical walk lanes for rho-parallel")->capture_default_str();
  solve->add_option("--dist-bits", cfg.dist_bits, "distinguished point bits t");
  solve->add_option("--precompute-m", cfg.precompute_m, "partial-product block length (0 = off)")->capture_default_str();
  solve->add_option("--restart-budget", cfg.restart_budget, "collisions examined before giving up")->capture_default_str();
  solve->add_option("--seed", cfg.seed, "global seed")->capture_default_str();
  solve->add_option("--bit-order", cfg.bit_order, "msb | lsb")->capture_default_str();
  solve->add_option("--out", out_path, "append the record to this JSON-lines file");
  SolveIo io;
  solve->add_option("--checkpoint", io.checkpoint_path, "distinguished-point checkpoint file (rho-parallel)");
  solve->add_flag("--resume", io.resume, "continue from the checkpoint file")->needs("--checkpoint");

  // table
  std::string rows_sel = "desk";
  RowRunOptions row_opts;
  std::string table_out;
  bool unsafe_scale = false;
  bool expected_only = false;
  auto* table = app.add_subcommand("table", "Expected vs observed c and rho_tot for table rows (CSV)");
  table->add_option("--rows", rows_sel, "desk | all | comma list of labels or descriptors (optionally /k)")
      ->capture_default_str();
  table->add_option("--runs", row_opts.runs, "runs per row")->capture_default_str();
  table->add_option("--seed", row_opts.seed, "global seed")->capture_default_str();
  table->add_option("--precompute-m", row_opts.precompute_m, "partial-product block length (0 = off)")
      ->capture_default_str();
  table->add_option("--out", table_out, "write CSV here instead of stdout");
  table->add_flag("--unsafe-scale", unsafe_scale, "run rows above the log2 n scale cap");
  table->add_flag("--expected-only", expected_only, "skip the runs, print expected values");

  // conjecture-scan
  i64 scan_from = -100000, scan_to = -3;
  double d_max = 4.0;
  bool all_disc = false;
  std::string scan_out;
  auto* scan = app.add_subcommand("conjecture-scan", "Minimal k with S_k representing the class group (CSV)");
  scan->add_option("--from", scan_from, "most negative discriminant")->capture_default_str();
  scan->add_option("--to", scan_to, "least negative discriminant")->capture_default_str();
  scan->add_option("--d-max", d_max, "search k up to d_max * log2 h")->capture_default_str();
  scan->add_flag("--all-discriminants", all_disc, "include non-fundamental discriminants");
  scan->add_option("--out", scan_out, "write CSV here instead of stdout");

  // verify-paper-run
  std::string which, hex, vorder = "both";
  auto* verify = app.add_subcommand("verify-paper-run", "Evaluate a published large-run bit-string");
  verify->add_option("which", which, "curve80 | class160")->required();
  verify->add_option("--hex", hex, "50 hex digits (default: the published string)");
  verify->add_option("--bit-order", vorder, "msb | lsb | both")->capture_default_str();

  // toy
  ToyOptions toy_opts;
  std::string toy_eta = "toy-linear";
  bool expect_paper = false;
  auto* toy = app.add_subcommand("toy", "Run the Z/127 toy walk and check it against the published one");
  toy->add_option("--eta", toy_eta, "toy-linear | keyed-hash")->capture_default_str();
  toy->add_option("--multiplier", toy_opts.multiplier, "toy eta multiplier")->capture_default_str();
  toy->add_flag("--expect-paper", expect_paper, "compare the walk with the published one (default for multiplier 96)");
  toy->add_option("--seed", toy_opts.seed, "seed (keyed-hash mode)")->capture_default_str();

  // stats
  std::string st_group, st_n;
  std::size_t st_k = 0;
  auto* stats = app.add_subcommand("stats", "Expected c and rho_tot for a group order and sequence length");
  stats->add_option("--group", st_group, "group descriptor (order computed)");
  stats->add_option("--order", st_n, "group order n (overrides --group)");
  stats->add_option("--k", st_k, "sequence length")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) {
      auto run = run_solve(cfg, io);
      const std::string line = to_json(run.record).dump();
      std::cout << line << '\n';
      if (!run.summary.empty()) std::cerr << run.summary << '\n';
      if (!out_path.empty()) open_out(out_path, true) << line << '\n';
      return run.status == SolveStatus::Found ? kOk : kNotFound;
    }

    if (*table) {
      const double cap = scale_cap_from_env();
      const auto sel = split(rows_sel, ',');
      std::ofstream file;
      if (!table_out.empty()) file = open_out(table_out, false);
      std::ostream& out = table_out.empty() ? std::cout : file;
      out << csv_header() << '\n';
      std::size_t matched = 0;
      for (const auto& row : published_rows()) {
        if (!row_selected(row, sel)) continue;
        ++matched;
        if (!unsafe_scale && row.log2n > cap) {
          std::cerr << "skipping " << row.label << " k=" << row.k << ": log2 n " << row.log2n << " above the scale cap "
                    << cap << " (use --unsafe-scale)\n";
          continue;
        }
        RowRunOptions ro = row_opts;
        if (expected_only) ro.runs = 0;
        auto res = run_row(row, ro);
        out << csv_line(res) << std::endl;
        if (res.failed) std::cerr << row.label << " k=" << row.k << ": " << res.failed << " runs hit the restart budget\n";
      }
      if (matched == 0) throw UsageError("--rows matched no table rows");
      return kOk;
    }

    if (*scan) {
      std::ofstream file;
      if (!scan_out.empty()) file = open_out(scan_out, false);
      std::ostream& out = scan_out.empty() ? std::cout : file;
      out << scan_csv_header() << '\n';
      if (scan_from > scan_to) std::swap(scan_from, scan_to);
      if (scan_to >= 0) throw UsageError("conjecture-scan: discriminants must be negative");
      for (i64 D = scan_to; D >= scan_from; --D) {
        const i64 r = pos_mod<i64>(D, 4);
        if (r != 0 && r != 1) continue;
        if (!all_disc && !is_fundamental_discriminant(D)) continue;
        try {
          out << scan_csv_line(scan_discriminant(D, d_max), kSchemaVersion) << '\n';
        } catch (const CapabilityError& e) {
          std::cerr << "skipping D=" << D << ": " << e.what() << '\n';
        }
      }
      return kOk;
    }

    if (*verify) {
      if (hex.empty()) hex = which == "curve80" ? kPublishedCurve80 : kPublishedClass160;
      std::vector<BitOrder> orders;
      if (vorder == "both") {
        orders = {BitOrder::Msb, BitOrder::Lsb};
      } else {
        orders = {parse_bit_order(vorder)};
      }
      auto rep = verify_paper_run(which, hex, orders);
      std::cout << "run " << rep.which << "\nhex " << rep.hex << "\ntarget " << rep.target << " (" << rep.target_note
                << ")\nstated term count " << rep.stated_count << '\n';
      for (const auto& l : rep.lines) {
        std::cout << (l.order == BitOrder::Msb ? "msb" : "lsb") << ": popcount " << l.popcount << ", product "
                  << l.product << ", " << (l.match ? "MATCH" : "mismatch") << '\n';
      }
      std::cout << "group ops " << rep.group_ops << '\n';
      return kOk;
    }

    if (*toy) {
      toy_opts.eta = parse_eta(toy_eta);
      toy_opts.expect_paper = expect_paper || toy_opts.multiplier == 96;
      auto rep = run_toy(toy_opts);
      for (const auto& l : rep.lines) std::cout << l << '\n';
      std::cout << (rep.pass ? "PASS" : "FAIL") << (rep.compared ? "" : " (walk not compared)") << '\n';
      return rep.pass ? kOk : kFail;
    }

    if (*stats) {
      BigInt n;
      if (!st_n.empty()) {
        n = parse_big(st_n);
      } else if (!st_group.empty()) {
        AnyGroup g = parse_group(st_group);
        auto o = std::visit([](const auto& grp) { return std::optional<BigInt>(grp.order()); }, g);
        if (!o) throw CapabilityError("group order unknown; pass --order");
        n = *o;
      } else {
        throw UsageError("stats needs --group or --order");
      }
      if (st_k < 2) throw UsageError("--k must be at least 2");
      auto m = expected_stats(n, (st_k + 1) / 2, st_k / 2);
      std::cout << "n " << to_string(n) << " (log2 " << fmt(log2_big(n), 2) << "), k " << st_k << ", d "
                << fmt(*m.density, 2) << "\nr " << m.r << "\nE[c] " << fmt(m.expected_c, 2) << "\nE[rho_tot] "
                << fmt(std::round(m.expected_rho_tot), 0) << '\n';
      if (m.low_density) std::cout << "warning: d < 2, rho_tot grows like n^((4-d)/4); point estimate unreliable\n";
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kUsage;
  } catch (const CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << '\n';
    return kCapability;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  return kOk;
}
