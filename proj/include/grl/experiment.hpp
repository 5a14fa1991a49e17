#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "grl/chain.hpp"
#include "grl/gridworld.hpp"
#include "grl/harness.hpp"
#include "json.hpp"

namespace grl {

struct EnvConfig {
  enum class Kind { grid, chain };
  Kind kind = Kind::grid;
  std::string grid_file;  // as written in the config
  GridSpec grid;          // loaded layout, theta override applied
  ChainSpec chain;
};

struct ExperimentConfig {
  std::string name = "experiment";
  AgentConfig agent;
  EnvConfig env;
  int runs = 10;
  int cycles = 200;
  std::uint64_t seed = 0;
  nlohmann::json source;  // the document as parsed, for the manifest

  void validate() const;
};

// Config document:
//   {"agent": {"kind", "horizon", "samples", "ucb", "gamma", "model", ...},
//    "env": {"kind": "grid", "gridFile": PATH, ["theta": REAL]}
//         | {"kind": "chain", "chain": {"N", "r0", "ri", "rb"}},
//    "runs", "cycles", "seed"}
// Relative grid paths resolve against base_dir. Unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

std::unique_ptr<Environment> make_environment(const EnvConfig& cfg);

RunTrace run_single(const ExperimentConfig& cfg, int run_id, const CycleObserver& observer = {});
// Runs execute on up to `threads` workers (0 = hardware concurrency); the
// result is ordered by run id and independent of scheduling.
std::vector<RunTrace> run_experiment(const ExperimentConfig& cfg, unsigned threads = 0);

inline constexpr const char* kCsvHeader = "run,t,action,reward,avg_reward,cum_info_gain,explored_pct";

void write_csv(std::ostream& out, const std::vector<RunTrace>& traces);
void write_aggregate_csv(std::ostream& out, const AggregateSeries& agg);
nlohmann::json make_manifest(const ExperimentConfig& cfg, const std::vector<RunTrace>& traces,
                             const std::string& csv_name);

std::string version_string();

}  // namespace grl
