#pragma once

#include "rqm/io.hpp"

namespace rqm {

/// Config: {"instrument": source, "cap", "rng_seed", "tasks": {validate, assumptions
/// {T_max, tau_max, word_len_max}, ep {T_max, mc {T, n}}, pressure {T_range, alpha_grid?},
/// ldp {O: [lo,hi], s_grid?, T_range}, hypotest {eps, T_range, s_grid?}}}.
/// T_range is [lo, hi] inclusive.
struct ResultManifest {
  std::string config_hash;
  std::string library_version;
  std::vector<std::string> outputs;       // files written, relative to output_dir
  io::json report;                        // per-task JSON results / errors
  std::vector<std::pair<std::string, double>> timings_ms;

  io::json to_json() const;
};

/// Executes the task blocks in dependency order (validate -> assumptions ->
/// ep/pressure -> ldp/hypotest), caching PathTables across tasks. Per-task
/// failures are recorded in the manifest without aborting independent tasks.
ResultManifest run_scenario(const io::json& config, const std::string& output_dir);

/// FNV-1a over the canonical config dump; identical config => identical hash.
std::string config_hash(const io::json& config);

inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace rqm
