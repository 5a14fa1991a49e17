#include "grl/harness.hpp"

#include <cmath>
#include <unordered_set>

#include "grl/gridworld.hpp"

namespace grl {

namespace {
constexpr std::uint64_t kEnvStream = 1;
constexpr std::uint64_t kAgentStream = 2;
}  // namespace

RunStreams run_streams(std::uint64_t base_seed, int run_id) {
  const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(run_id);
  const RngStream root(seed);
  return {seed, root.split(kEnvStream), root.split(kAgentStream)};
}

RunTrace run_simulation(Agent& agent, Environment& env, int cycles, RngStream env_rng, RngStream agent_rng,
                        const CycleObserver& observer) {
  if (cycles < 1) throw ConfigError("cycle count must be at least 1");
  const auto* grid = dynamic_cast<const Gridworld*>(&env);
  RunTrace trace;
  trace.records.reserve(static_cast<std::size_t>(cycles));
  std::unordered_set<int> visited;
  if (grid != nullptr) trace.reachable_tiles = reachable_tile_count(grid->spec());

  Action last = kNoAction;
  double cum_reward = 0.0;
  double cum_ig = 0.0;
  for (int t = 1; t <= cycles; ++t) {
    const Percept e = env.generate_percept(env_rng);
    if (grid != nullptr) visited.insert(grid->position().row * grid->spec().size + grid->position().col);
    try {
      agent.update(last, e);
    } catch (const ModelInconsistency& ex) {
      throw ModelInconsistency("cycle " + std::to_string(t) + " (last action " + std::to_string(last) +
                               ", observation " + std::to_string(e.observation) + ", reward " +
                               std::to_string(e.reward) + "): " + ex.what());
    }
    RngStream step_rng = agent_rng.split(static_cast<std::uint64_t>(t));
    const Action a = agent.select_action(step_rng);
    env.perform(a);
    cum_reward += e.reward;
    cum_ig += agent.last_info_gain();
    trace.records.push_back({t, a, e.observation, e.reward, cum_reward, cum_ig, static_cast<int>(visited.size())});
    if (observer) observer({t, a, e, agent, env});
    last = a;
  }
  return trace;
}

double metric_avg_reward(const RunTrace& trace, int t) {
  if (t < 1 || static_cast<std::size_t>(t) > trace.records.size()) throw ConfigError("avg_reward: t out of range");
  return trace.records[static_cast<std::size_t>(t - 1)].cumulative_reward / t;
}

double metric_exploration(const RunTrace& trace, int t) {
  if (!trace.reachable_tiles) throw ConfigError("exploration is only defined on gridworlds");
  if (t < 1 || static_cast<std::size_t>(t) > trace.records.size()) throw ConfigError("exploration: t out of range");
  return 100.0 * trace.records[static_cast<std::size_t>(t - 1)].explored_tiles / *trace.reachable_tiles;
}

double metric_optimal_avg(int distance, double theta, int t, double r_empty, double r_cake) {
  if (t < 1) throw ConfigError("optimal_avg: t must be positive");
  return static_cast<double>(distance) / t * r_empty + theta * r_cake;
}

std::pair<double, double> mean_and_std(const std::vector<double>& xs) {
  if (xs.empty()) throw ConfigError("mean_and_std of nothing");
  // Shift by the first value so identical inputs give exactly zero spread.
  const double x0 = xs.front();
  const double n = static_cast<double>(xs.size());
  double shift = 0.0;
  for (double x : xs) shift += x - x0;
  shift /= n;
  double var = 0.0;
  for (double x : xs) var += (x - x0 - shift) * (x - x0 - shift);
  var /= n;
  return {x0 + shift, std::sqrt(var)};
}

AggregateSeries aggregate(const std::vector<RunTrace>& traces) {
  if (traces.empty()) throw ConfigError("aggregate needs at least one trace");
  const std::size_t T = traces.front().records.size();
  const bool grid = traces.front().reachable_tiles.has_value();
  for (const auto& tr : traces) {
    if (tr.records.size() != T) throw ConfigError("aggregate: traces have different lengths");
    if (tr.reachable_tiles.has_value() != grid) throw ConfigError("aggregate: mixed grid and non-grid traces");
  }
  AggregateSeries out;
  out.runs = static_cast<int>(traces.size());
  if (grid) out.explored_pct.emplace();
  auto push = [](SeriesStats& s, const std::vector<double>& xs) {
    const auto [m, sd] = mean_and_std(xs);
    s.mean.push_back(m);
    s.std.push_back(sd);
  };
  std::vector<double> col(traces.size());
  for (std::size_t i = 0; i < T; ++i) {
    const int t = static_cast<int>(i) + 1;
    for (std::size_t r = 0; r < traces.size(); ++r) col[r] = traces[r].records[i].reward;
    push(out.reward, col);
    for (std::size_t r = 0; r < traces.size(); ++r) col[r] = metric_avg_reward(traces[r], t);
    push(out.avg_reward, col);
    for (std::size_t r = 0; r < traces.size(); ++r) col[r] = traces[r].records[i].cumulative_info_gain;
    push(out.cum_info_gain, col);
    if (grid) {
      for (std::size_t r = 0; r < traces.size(); ++r) col[r] = metric_exploration(traces[r], t);
      push(*out.explored_pct, col);
    }
  }
  return out;
}

}  // namespace grl
