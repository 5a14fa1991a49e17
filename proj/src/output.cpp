#include <cstdio>
#include <ostream>

#include "grl/experiment.hpp"

#ifndef GRL_VERSION
#define GRL_VERSION "0.1.0"
#endif

namespace grl {

namespace {

std::string g9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

std::string version_string() { return GRL_VERSION; }

void write_csv(std::ostream& out, const std::vector<RunTrace>& traces) {
  out << kCsvHeader << '\n';
  for (const RunTrace& tr : traces)
    for (const CycleRecord& r : tr.records) {
      out << tr.run_id << ',' << r.t << ',' << r.action << ',' << g9(r.reward) << ','
          << g9(metric_avg_reward(tr, r.t)) << ',' << g9(r.cumulative_info_gain) << ',';
      if (tr.reachable_tiles) out << g9(metric_exploration(tr, r.t));
      out << '\n';
    }
}

void write_aggregate_csv(std::ostream& out, const AggregateSeries& agg) {
  out << "t,reward_mean,reward_std,avg_reward_mean,avg_reward_std,cum_info_gain_mean,cum_info_gain_std,"
         "explored_pct_mean,explored_pct_std\n";
  for (std::size_t i = 0; i < agg.avg_reward.mean.size(); ++i) {
    out << i + 1 << ',' << g9(agg.reward.mean[i]) << ',' << g9(agg.reward.std[i]) << ','
        << g9(agg.avg_reward.mean[i]) << ',' << g9(agg.avg_reward.std[i]) << ',' << g9(agg.cum_info_gain.mean[i])
        << ',' << g9(agg.cum_info_gain.std[i]) << ',';
    if (agg.explored_pct) out << g9(agg.explored_pct->mean[i]) << ',' << g9(agg.explored_pct->std[i]);
    else out << ',';
    out << '\n';
  }
}

nlohmann::json make_manifest(const ExperimentConfig& cfg, const std::vector<RunTrace>& traces,
                             const std::string& csv_name) {
  nlohmann::json m;
  m["version"] = version_string();
  m["name"] = cfg.name;
  m["config"] = cfg.source;
  m["effective"] = {{"runs", cfg.runs},
                    {"cycles", cfg.cycles},
                    {"seed", cfg.seed},
                    {"agent", std::string(to_string(cfg.agent.kind))},
                    {"model", std::string(to_string(cfg.agent.model))},
                    {"horizon", cfg.agent.horizon},
                    {"samples", cfg.agent.samples},
                    {"ucb", cfg.agent.ucb},
                    {"gamma", cfg.agent.gamma},
                    {"undiscounted", cfg.agent.undiscounted}};
  m["csv"] = csv_name;
  m["std"] = "population";
  nlohmann::json runs = nlohmann::json::array();
  for (const RunTrace& tr : traces) {
    nlohmann::json r = {{"run", tr.run_id}, {"seed", tr.seed}};
    if (tr.reachable_tiles) r["reachable_tiles"] = *tr.reachable_tiles;
    runs.push_back(r);
  }
  m["runs"] = runs;
  return m;
}

}  // namespace grl
