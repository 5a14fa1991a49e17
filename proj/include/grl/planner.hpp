#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "grl/model.hpp"
#include "grl/utility.hpp"

namespace grl {

struct PlannerConfig {
  int horizon = 6;
  int samples = 600;
  double ucb = 1.0;
  double gamma = 0.99;
  // Sum raw utilities along a sample instead of weighting step k by gamma^k.
  bool undiscounted = false;
  RewardRange utility_range{0.0, 1.0};

  double step_discount() const { return undiscounted ? 1.0 : gamma; }
  void validate() const;
};

struct ChanceNode;

struct DecisionNode {
  std::uint64_t visits = 0;
  double value = 0.0;
  std::vector<std::unique_ptr<ChanceNode>> children;  // indexed by action
};

struct ChanceNode {
  std::uint64_t visits = 0;
  double value = 0.0;
  std::unordered_map<Percept, std::unique_ptr<DecisionNode>, PerceptHash> children;
};

// Running-mean update shared by both node kinds.
template <class Node>
void record_return(Node& node, double ret) {
  node.value += (ret - node.value) / static_cast<double>(node.visits + 1);
  node.visits += 1;
}

double uct_score(const DecisionNode& parent, const ChanceNode& child, const PlannerConfig& cfg);

// Unvisited actions first (uniformly); otherwise the highest UCB score with
// random tie-breaking.
Action uct_select(const DecisionNode& node, int num_actions, const PlannerConfig& cfg, RngStream& rng);

// Uniform-random actions for `remaining` steps; returns the discounted sum of
// utilities. The caller is responsible for restoring the model.
double rollout(Model& model, int remaining, UtilityKind utility, const PlannerConfig& cfg, RngStream& rng);

// One pass of the tree search below `node` with `remaining` steps left. The
// root never rolls out; any other unvisited decision node does.
double mcts_sample(DecisionNode& node, Model& model, int remaining, bool is_root, UtilityKind utility,
                   const PlannerConfig& cfg, RngStream& rng);

inline constexpr double kInfoGainResetThreshold = 1e-9;

class Planner {
 public:
  Planner(PlannerConfig cfg, UtilityKind utility);

  // Runs cfg.samples passes from the root, restoring the model after each,
  // and returns arg max of the root action values (random tie-break).
  Action plan(Model& model, RngStream& rng);
  // Tree reuse across cycles: keep the (a, e) subtree unless beliefs moved.
  void advance(Action a, const Percept& e, double info_gain);
  void reset();

  const DecisionNode& root() const { return *root_; }
  const PlannerConfig& config() const { return cfg_; }
  UtilityKind utility() const { return utility_; }
  // Highest root action value among visited actions.
  std::optional<double> best_value() const;
  // One line describing every root action: index, visits, value and UCB score.
  std::string debug_line() const;

 private:
  PlannerConfig cfg_;
  UtilityKind utility_;
  std::unique_ptr<DecisionNode> root_;
};

}  // namespace grl
