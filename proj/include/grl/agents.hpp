#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "grl/mixture.hpp"
#include "grl/planner.hpp"

namespace grl {

enum class AgentKind { aimu, aixi, square, shannon, kl, bayesexp, thompson, mdl, qlearn };
enum class ModelKind { loc, dirichlet, truth, dogmatic };

AgentKind parse_agent_kind(std::string_view s);
ModelKind parse_model_kind(std::string_view s);
std::string_view to_string(AgentKind k);
std::string_view to_string(ModelKind k);

struct AgentConfig {
  AgentKind kind = AgentKind::aixi;
  ModelKind model = ModelKind::loc;
  int horizon = 6;
  int samples = 600;
  double ucb = 1.0;
  double gamma = 0.99;
  bool undiscounted = false;
  std::optional<double> theta;  // dispenser probability assumed by the model class
  double dogmatic_mass = 0.999;
  std::optional<double> eps0;  // BayesExp threshold scale; default 0.05 * prior entropy
  double q_alpha = 0.9;
  double q_epsilon = 0.05;
  double q_init = 100.0;
  double underflow_clamp = kDefaultUnderflowClamp;

  PlannerConfig planner(RewardRange range) const;
};

// Per-cycle streams handed to select_action are split further by purpose so
// that auxiliary draws never shift the planner's stream.
inline constexpr std::uint64_t kStreamResample = 0x7e5a;
inline constexpr std::uint64_t kStreamExplore = 0xe8b1;

class Agent {
 public:
  virtual ~Agent() = default;

  // Conditions on percept e that followed action a (kNoAction on cycle 1).
  virtual void update(Action a, const Percept& e) = 0;
  virtual Action select_action(RngStream& rng) = 0;
  virtual int num_actions() const = 0;
  virtual std::string_view name() const = 0;
  // Belief model, if the agent has one.
  virtual const Model* model() const { return nullptr; }

  double last_info_gain() const { return last_info_gain_; }

 protected:
  double last_info_gain_ = 0.0;
};

// Plans on its own model with a fixed utility: AImu, AIxi and the KSAs.
class PlanningAgent : public Agent {
 public:
  PlanningAgent(std::string name, std::unique_ptr<Model> model, UtilityKind utility, const AgentConfig& cfg);

  void update(Action a, const Percept& e) override;
  Action select_action(RngStream& rng) override;
  int num_actions() const override { return model_->num_actions(); }
  std::string_view name() const override { return name_; }
  const Model* model() const override { return model_.get(); }
  const Planner& planner() const { return planner_; }

 protected:
  // Updates the model and returns the information gain.
  double observe(Action a, const Percept& e);

  std::string name_;
  std::unique_ptr<Model> model_;
  Planner planner_;
};

// Bayes-optimal agent that switches to information-seeking bursts of length
// m whenever the root information-gain value exceeds eps0 / sqrt(t).
class BayesExpAgent final : public PlanningAgent {
 public:
  BayesExpAgent(std::unique_ptr<Model> model, const AgentConfig& cfg);

  void update(Action a, const Percept& e) override;
  Action select_action(RngStream& rng) override;

  double epsilon(int t) const;
  bool exploring() const { return last_explore_; }
  int cycle() const { return t_; }
  // Root information-gain value computed at the last exploit/explore decision.
  std::optional<double> last_ig_value() const { return last_ig_value_; }

 private:
  Planner ig_planner_;
  double eps0_;
  int horizon_;
  int t_ = 0;
  int explore_left_ = 0;
  bool last_explore_ = false;
  std::optional<double> last_ig_value_;
};

// Follows the optimal policy of one hypothesis from a mixture: sampled from
// the posterior every m cycles (Thompson) or the simplest unfalsified one (MDL).
class HypothesisAgent final : public Agent {
 public:
  enum class Rule { thompson, mdl };

  HypothesisAgent(Rule rule, std::unique_ptr<MixtureModel> model, const AgentConfig& cfg);

  void update(Action a, const Percept& e) override;
  Action select_action(RngStream& rng) override;
  int num_actions() const override { return mixture_->num_actions(); }
  std::string_view name() const override { return rule_ == Rule::thompson ? "thompson" : "mdl"; }
  const Model* model() const override { return mixture_.get(); }
  const MixtureModel& mixture() const { return *mixture_; }

  std::optional<std::size_t> hypothesis() const { return rho_; }
  int commitment_left() const { return commit_left_; }
  int resamples() const { return resamples_; }
  // Distinct hypotheses handed to the planner since the last resample.
  std::size_t hypotheses_planned_since_resample() const { return planned_since_resample_.size(); }

 private:
  Rule rule_;
  std::unique_ptr<MixtureModel> mixture_;
  Planner planner_;
  int horizon_;
  std::optional<std::size_t> rho_;
  int commit_left_ = 0;
  int resamples_ = 0;
  std::vector<std::size_t> planned_since_resample_;
};

// Tabular one-step Q-learning keyed by the full percept.
class QLearningAgent final : public Agent {
 public:
  QLearningAgent(int num_actions, const AgentConfig& cfg);

  void update(Action a, const Percept& e) override;
  Action select_action(RngStream& rng) override;
  int num_actions() const override { return num_actions_; }
  std::string_view name() const override { return "qlearn"; }

  double q(const Percept& s, Action a) const;
  void set_q(const Percept& s, Action a, double v);
  // Q(s,a) += alpha (r + gamma max_a' Q(s',a') - Q(s,a)).
  void learn(const Percept& s, Action a, double r, const Percept& s2);

 private:
  std::vector<double>& row(const Percept& s);

  int num_actions_;
  double alpha_;
  double epsilon_;
  double gamma_;
  double init_;
  std::unordered_map<Percept, std::vector<double>, PerceptHash> table_;
  std::optional<Percept> state_;
};

// Builds an agent for a true environment. Grid agents derive their model
// class from the true layout (dispensers removed); the chain supports only
// aimu and qlearn.
std::unique_ptr<Agent> make_agent(const AgentConfig& cfg, const Environment& truth);

}  // namespace grl
