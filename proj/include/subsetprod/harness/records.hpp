#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "subsetprod/hash.hpp"
#include "subsetprod/harness/experiments.hpp"

namespace subsetprod::harness {

using nlohmann::json;

struct RunConfig {
  std::string group;
  std::optional<std::string> order;  // externally supplied #G
  std::string seq = "auto";          // auto | toy | curve | class | class-desc | random
  std::size_t k = 0;
  std::uint64_t seq_seed = 1;
  std::string alg = "rho";  // bsgs | bsgs-rand | rho | rho-parallel
  std::string eta = "keyed";
  std::optional<std::string> start;
  unsigned workers = 1;
  unsigned lanes = 8;
  std::optional<unsigned> dist_bits;
  std::size_t precompute_m = 0;
  std::uint64_t seed = 1;
  std::uint64_t restart_budget = 64;
  std::string bit_order = "msb";
};

inline json to_json(const RunConfig& c) {
  json j;
  j["group"] = c.group;
  j["order"] = c.order ? json(*c.order) : json(nullptr);
  j["seq"] = c.seq;
  j["k"] = c.k;
  j["seq_seed"] = c.seq_seed;
  j["alg"] = c.alg;
  j["eta"] = c.eta;
  j["start"] = c.start ? json(*c.start) : json(nullptr);
  j["workers"] = c.workers;
  j["lanes"] = c.lanes;
  j["dist_bits"] = c.dist_bits ? json(*c.dist_bits) : json(nullptr);
  j["precompute_m"] = c.precompute_m;
  j["seed"] = c.seed;
  j["restart_budget"] = c.restart_budget;
  j["bit_order"] = c.bit_order;
  return j;
}

inline RunConfig config_from_json(const json& j) {
  RunConfig c;
  try {
    c.group = j.at("group").get<std::string>();
    if (!j.at("order").is_null()) c.order = j.at("order").get<std::string>();
    c.seq = j.at("seq").get<std::string>();
    c.k = j.at("k").get<std::size_t>();
    c.seq_seed = j.at("seq_seed").get<std::uint64_t>();
    c.alg = j.at("alg").get<std::string>();
    c.eta = j.at("eta").get<std::string>();
    if (!j.at("start").is_null()) c.start = j.at("start").get<std::string>();
    c.workers = j.at("workers").get<unsigned>();
    c.lanes = j.at("lanes").get<unsigned>();
    if (!j.at("dist_bits").is_null()) c.dist_bits = j.at("dist_bits").get<unsigned>();
    c.precompute_m = j.at("precompute_m").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.restart_budget = j.at("restart_budget").get<std::uint64_t>();
    c.bit_order = j.at("bit_order").get<std::string>();
  } catch (const json::exception& e) {
    throw InputError(std::string("run config: ") + e.what());
  }
  return c;
}

// SipHash of the canonical (sorted-key) JSON dump.
inline std::string config_hash(const RunConfig& c) {
  static const Key128 key{0x636f6e666967ULL, 0x68617368ULL};
  const std::string s = to_json(c).dump();
  const std::uint64_t h = SipHash::hash(key, reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct ResultRecord {
  RunConfig config;
  std::string status;
  std::optional<std::string> answer_hex;
  std::size_t popcount = 0;
  bool verified = false;
  std::uint64_t c = 0;
  std::uint64_t rho_tot = 0;
  std::uint64_t phi_evals = 0;
  std::uint64_t group_ops = 0;
  double wall_seconds = 0;
  std::optional<std::uint64_t> tail, cycle;
  std::string group_order;  // decimal, empty if unknown
};

inline json to_json(const ResultRecord& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = to_json(r.config);
  j["config_hash"] = config_hash(r.config);
  j["status"] = r.status;
  j["answer"] = r.answer_hex ? json(*r.answer_hex) : json(nullptr);
  j["popcount"] = r.popcount;
  j["verified"] = r.verified;
  j["c"] = r.c;
  j["rho_tot"] = r.rho_tot;
  j["phi_evals"] = r.phi_evals;
  j["group_ops"] = r.group_ops;
  j["wall_seconds"] = r.wall_seconds;
  j["tail"] = r.tail ? json(*r.tail) : json(nullptr);
  j["cycle"] = r.cycle ? json(*r.cycle) : json(nullptr);
  j["group_order"] = r.group_order;
  return j;
}

inline ResultRecord record_from_json(const json& j) {
  ResultRecord r;
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) throw InputError("result record: unknown schema version");
    r.config = config_from_json(j.at("config"));
    if (j.at("config_hash").get<std::string>() != config_hash(r.config)) {
      throw InputError("result record: config hash does not match its config");
    }
    r.status = j.at("status").get<std::string>();
    if (!j.at("answer").is_null()) r.answer_hex = j.at("answer").get<std::string>();
    r.popcount = j.at("popcount").get<std::size_t>();
    r.verified = j.at("verified").get<bool>();
    r.c = j.at("c").get<std::uint64_t>();
    r.rho_tot = j.at("rho_tot").get<std::uint64_t>();
    r.phi_evals = j.at("phi_evals").get<std::uint64_t>();
    r.group_ops = j.at("group_ops").get<std::uint64_t>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    if (!j.at("tail").is_null()) r.tail = j.at("tail").get<std::uint64_t>();
    if (!j.at("cycle").is_null()) r.cycle = j.at("cycle").get<std::uint64_t>();
    r.group_order = j.at("group_order").get<std::string>();
  } catch (const json::exception& e) {
    throw InputError(std::string("result record: ") + e.what());
  }
  return r;
}

}  // namespace subsetprod::harness
