#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "grl/agents.hpp"
#include "grl/environment.hpp"

namespace grl {

struct CycleRecord {
  int t = 0;
  Action action = kNoAction;
  std::uint64_t observation = 0;
  double reward = 0.0;
  double cumulative_reward = 0.0;
  double cumulative_info_gain = 0.0;
  int explored_tiles = 0;  // 0 outside gridworlds
};

struct RunTrace {
  int run_id = 0;
  std::uint64_t seed = 0;
  std::optional<int> reachable_tiles;  // gridworlds only
  std::vector<CycleRecord> records;
};

// What an observer sees once per cycle, after the environment performed the
// agent's action.
struct CycleView {
  int t;
  Action action;
  const Percept& percept;
  const Agent& agent;
  const Environment& env;
};
using CycleObserver = std::function<void(const CycleView&)>;

// The interaction loop: percept, agent update, action, environment step.
// Environment noise comes from env_rng; the agent gets agent_rng.split(t) at
// cycle t. Model inconsistencies are rethrown with the cycle attached.
RunTrace run_simulation(Agent& agent, Environment& env, int cycles, RngStream env_rng, RngStream agent_rng,
                        const CycleObserver& observer = {});

// Streams for run `run_id` of an experiment seeded with base_seed.
struct RunStreams {
  std::uint64_t seed;
  RngStream env;
  RngStream agent;
};
RunStreams run_streams(std::uint64_t base_seed, int run_id);

double metric_avg_reward(const RunTrace& trace, int t);
// 100 * distinct tiles occupied up to t / BFS-reachable tiles. Throws for non-grid traces.
double metric_exploration(const RunTrace& trace, int t);
double metric_optimal_avg(int distance, double theta, int t, double r_empty, double r_cake);

struct SeriesStats {
  std::vector<double> mean;
  std::vector<double> std;  // population standard deviation
};

struct AggregateSeries {
  int runs = 0;
  SeriesStats reward;
  SeriesStats avg_reward;
  SeriesStats cum_info_gain;
  std::optional<SeriesStats> explored_pct;
};

// Throws ConfigError on an empty input or unequal trace lengths.
AggregateSeries aggregate(const std::vector<RunTrace>& traces);

// Mean and population standard deviation of one value per run.
std::pair<double, double> mean_and_std(const std::vector<double>& xs);

}  // namespace grl
