#include "grl/planner.hpp"

#include <cmath>
#include <cstdio>

namespace grl {

void PlannerConfig::validate() const {
  if (horizon < 1) throw ConfigError("planner horizon must be at least 1");
  if (samples < 1) throw ConfigError("planner samples must be at least 1");
  if (!(ucb > 0.0)) throw ConfigError("UCB constant must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("planner discount must lie in [0, 1]");
  if (!(utility_range.max > utility_range.min)) throw ConfigError("utility range must be non-empty");
}

double uct_score(const DecisionNode& parent, const ChanceNode& child, const PlannerConfig& cfg) {
  const double width = cfg.horizon * (cfg.utility_range.max - cfg.utility_range.min);
  return child.value / width +
         cfg.ucb * std::sqrt(std::log(static_cast<double>(parent.visits)) / static_cast<double>(child.visits));
}

Action uct_select(const DecisionNode& node, int num_actions, const PlannerConfig& cfg, RngStream& rng) {
  std::vector<Action> candidates;
  for (Action a = 0; a < num_actions; ++a) {
    const ChanceNode* c =
        node.children.size() > static_cast<std::size_t>(a) ? node.children[static_cast<std::size_t>(a)].get() : nullptr;
    if (c == nullptr || c->visits == 0) candidates.push_back(a);
  }
  if (candidates.empty()) {
    double best = -std::numeric_limits<double>::infinity();
    for (Action a = 0; a < num_actions; ++a) {
      const double s = uct_score(node, *node.children[static_cast<std::size_t>(a)], cfg);
      if (s > best) {
        best = s;
        candidates.assign(1, a);
      } else if (s == best) {
        candidates.push_back(a);
      }
    }
  }
  if (candidates.size() == 1) return candidates.front();
  return candidates[rng.uniform_index(candidates.size())];
}

namespace {

// Utility of one simulated step: act, sample a percept, update beliefs.
double simulate_step(Model& model, Action a, UtilityKind utility, RngStream& rng, Percept* out = nullptr) {
  model.perform(a);
  const Percept e = model.generate_percept(rng);
  const double xi = model.update(a, e);
  if (out != nullptr) *out = e;
  return step_utility(utility, e, xi, model);
}

double sample_chance(ChanceNode& node, Action a, Model& model, int remaining, UtilityKind utility,
                     const PlannerConfig& cfg, RngStream& rng) {
  Percept e;
  const double u = simulate_step(model, a, utility, rng, &e);
  double ret = u;
  if (remaining > 1) {
    auto& child = node.children[e];
    if (!child) child = std::make_unique<DecisionNode>();
    ret = u + cfg.step_discount() * mcts_sample(*child, model, remaining - 1, false, utility, cfg, rng);
  }
  record_return(node, ret);
  return ret;
}

}  // namespace

double rollout(Model& model, int remaining, UtilityKind utility, const PlannerConfig& cfg, RngStream& rng) {
  if (remaining <= 0) return 0.0;
  const auto na = static_cast<std::size_t>(model.num_actions());
  std::vector<double> u(static_cast<std::size_t>(remaining));
  for (double& x : u) x = simulate_step(model, static_cast<Action>(rng.uniform_index(na)), utility, rng);
  // Folded backwards so that it matches the tree recursion bit for bit.
  double ret = 0.0;
  for (auto it = u.rbegin(); it != u.rend(); ++it) ret = *it + cfg.step_discount() * ret;
  return ret;
}

double mcts_sample(DecisionNode& node, Model& model, int remaining, bool is_root, UtilityKind utility,
                   const PlannerConfig& cfg, RngStream& rng) {
  if (remaining <= 0) return 0.0;
  double ret;
  if (node.visits == 0 && !is_root) {
    ret = rollout(model, remaining, utility, cfg, rng);
  } else {
    const int na = model.num_actions();
    if (node.children.size() < static_cast<std::size_t>(na)) node.children.resize(static_cast<std::size_t>(na));
    const Action a = uct_select(node, na, cfg, rng);
    auto& child = node.children[static_cast<std::size_t>(a)];
    if (!child) child = std::make_unique<ChanceNode>();
    ret = sample_chance(*child, a, model, remaining, utility, cfg, rng);
  }
  record_return(node, ret);
  return ret;
}

Planner::Planner(PlannerConfig cfg, UtilityKind utility)
    : cfg_(cfg), utility_(utility), root_(std::make_unique<DecisionNode>()) {
  cfg_.validate();
}

Action Planner::plan(Model& model, RngStream& rng) {
  const ModelSnapshot snap = model.snapshot();
  for (int i = 0; i < cfg_.samples; ++i) {
    mcts_sample(*root_, model, cfg_.horizon, true, utility_, cfg_, rng);
    model.restore(snap);
  }
  std::vector<Action> best;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < root_->children.size(); ++a) {
    const auto& c = root_->children[a];
    if (!c || c->visits == 0) continue;
    if (c->value > best_v) {
      best_v = c->value;
      best.assign(1, static_cast<Action>(a));
    } else if (c->value == best_v) {
      best.push_back(static_cast<Action>(a));
    }
  }
  if (best.size() == 1) return best.front();
  return best[rng.uniform_index(best.size())];
}

void Planner::advance(Action a, const Percept& e, double info_gain) {
  if (std::abs(info_gain) > kInfoGainResetThreshold || a < 0 ||
      static_cast<std::size_t>(a) >= root_->children.size() || !root_->children[static_cast<std::size_t>(a)]) {
    reset();
    return;
  }
  auto& chance = *root_->children[static_cast<std::size_t>(a)];
  auto it = chance.children.find(e);
  if (it == chance.children.end() || !it->second) {
    reset();
    return;
  }
  std::unique_ptr<DecisionNode> next = std::move(it->second);
  root_ = std::move(next);
}

void Planner::reset() { root_ = std::make_unique<DecisionNode>(); }

std::optional<double> Planner::best_value() const {
  std::optional<double> best;
  for (const auto& c : root_->children)
    if (c && c->visits > 0 && (!best || c->value > *best)) best = c->value;
  return best;
}

std::string Planner::debug_line() const {
  std::string out;
  char buf[128];
  for (std::size_t a = 0; a < root_->children.size(); ++a) {
    const auto& c = root_->children[a];
    if (!c) continue;
    const double score = c->visits > 0 && root_->visits > 0 ? uct_score(*root_, *c, cfg_) : 0.0;
    std::snprintf(buf, sizeof buf, "%sa=%zu T=%llu V=%.6g ucb=%.6g", out.empty() ? "" : " ", a,
                  static_cast<unsigned long long>(c->visits), c->value, score);
    out += buf;
  }
  return out;
}

}  // namespace grl
