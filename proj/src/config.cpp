#include <atomic>
#include <fstream>
#include <set>
#include <thread>

#include "grl/experiment.hpp"

namespace grl {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("bad value for '") + key + "': " + ex.what());
  }
}

AgentConfig parse_agent(const json& j) {
  reject_unknown(j,
                 {"kind", "horizon", "samples", "ucb", "gamma", "undiscounted", "model", "theta", "mass", "eps0",
                  "alpha", "epsilon", "init", "underflow"},
                 "agent");
  AgentConfig a;
  if (!j.contains("kind")) throw ConfigError("agent.kind is required");
  a.kind = parse_agent_kind(get_or<std::string>(j, "kind", ""));
  if (a.kind == AgentKind::aimu) a.model = ModelKind::truth;
  if (j.contains("model")) a.model = parse_model_kind(get_or<std::string>(j, "model", ""));
  a.horizon = get_or(j, "horizon", a.horizon);
  a.samples = get_or(j, "samples", a.samples);
  a.ucb = get_or(j, "ucb", a.ucb);
  a.gamma = get_or(j, "gamma", a.gamma);
  a.undiscounted = get_or(j, "undiscounted", a.undiscounted);
  if (j.contains("theta")) a.theta = get_or(j, "theta", 0.0);
  a.dogmatic_mass = get_or(j, "mass", a.dogmatic_mass);
  if (j.contains("eps0")) a.eps0 = get_or(j, "eps0", 0.0);
  a.q_alpha = get_or(j, "alpha", a.q_alpha);
  a.q_epsilon = get_or(j, "epsilon", a.q_epsilon);
  a.q_init = get_or(j, "init", a.q_init);
  a.underflow_clamp = get_or(j, "underflow", a.underflow_clamp);
  a.planner(RewardRange{0.0, 1.0}).validate();
  return a;
}

EnvConfig parse_env(const json& j, const std::filesystem::path& base_dir) {
  reject_unknown(j, {"kind", "gridFile", "theta", "chain"}, "env");
  EnvConfig e;
  const std::string kind = get_or<std::string>(j, "kind", "grid");
  if (kind == "grid") {
    e.kind = EnvConfig::Kind::grid;
    if (!j.contains("gridFile")) throw ConfigError("env.gridFile is required for grid environments");
    e.grid_file = get_or<std::string>(j, "gridFile", "");
    std::filesystem::path p(e.grid_file);
    if (p.is_relative()) p = base_dir / p;
    e.grid = load_grid(p.string());
    if (j.contains("theta")) {
      const double theta = get_or(j, "theta", 0.0);
      for (Tile& t : e.grid.tiles)
        if (t.kind == TileKind::dispenser) t.theta = theta;
    }
    e.grid.validate(true);
  } else if (kind == "chain") {
    e.kind = EnvConfig::Kind::chain;
    const json c = j.contains("chain") ? j.at("chain") : json::object();
    reject_unknown(c, {"N", "r0", "ri", "rb"}, "env.chain");
    e.chain.n = get_or(c, "N", e.chain.n);
    e.chain.r0 = get_or(c, "r0", e.chain.r0);
    e.chain.ri = get_or(c, "ri", e.chain.ri);
    e.chain.rb = get_or(c, "rb", e.chain.rb);
    e.chain.validate();
  } else {
    throw ConfigError("unknown environment kind '" + kind + "'");
  }
  return e;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (cycles < 1) throw ConfigError("cycles must be at least 1");
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  reject_unknown(doc, {"name", "agent", "env", "runs", "cycles", "seed"}, "config");
  ExperimentConfig cfg;
  cfg.source = doc;
  cfg.name = get_or<std::string>(doc, "name", cfg.name);
  if (!doc.contains("agent")) throw ConfigError("config.agent is required");
  if (!doc.contains("env")) throw ConfigError("config.env is required");
  cfg.agent = parse_agent(doc.at("agent"));
  cfg.env = parse_env(doc.at("env"), base_dir);
  cfg.runs = get_or(doc, "runs", cfg.runs);
  cfg.cycles = get_or(doc, "cycles", cfg.cycles);
  cfg.seed = get_or<std::uint64_t>(doc, "seed", cfg.seed);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& ex) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + ex.what());
  }
  ExperimentConfig cfg = parse_config(doc, path.parent_path());
  if (!doc.contains("name")) cfg.name = path.stem().string();
  return cfg;
}

std::unique_ptr<Environment> make_environment(const EnvConfig& cfg) {
  if (cfg.kind == EnvConfig::Kind::chain) return std::make_unique<Chain>(cfg.chain);
  return std::make_unique<Gridworld>(cfg.grid);
}

RunTrace run_single(const ExperimentConfig& cfg, int run_id, const CycleObserver& observer) {
  const RunStreams streams = run_streams(cfg.seed, run_id);
  auto env = make_environment(cfg.env);
  auto agent = make_agent(cfg.agent, *env);
  RunTrace trace = run_simulation(*agent, *env, cfg.cycles, streams.env, streams.agent, observer);
  trace.run_id = run_id;
  trace.seed = streams.seed;
  return trace;
}

std::vector<RunTrace> run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, static_cast<unsigned>(cfg.runs));
  std::vector<RunTrace> traces(static_cast<std::size_t>(cfg.runs));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.runs));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < cfg.runs; i = next.fetch_add(1)) {
      try {
        traces[static_cast<std::size_t>(i)] = run_single(cfg, i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  return traces;
}

}  // namespace grl
