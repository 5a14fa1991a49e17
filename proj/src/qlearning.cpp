#include <algorithm>

#include "grl/agents.hpp"

namespace grl {

QLearningAgent::QLearningAgent(int num_actions, const AgentConfig& cfg)
    : num_actions_(num_actions), alpha_(cfg.q_alpha), epsilon_(cfg.q_epsilon), gamma_(cfg.gamma), init_(cfg.q_init) {
  if (num_actions_ < 1) throw ConfigError("Q-learning needs at least one action");
  if (!(alpha_ > 0.0 && alpha_ <= 1.0)) throw ConfigError("Q-learning rate must lie in (0, 1]");
  if (!(epsilon_ >= 0.0 && epsilon_ <= 1.0)) throw ConfigError("Q-learning epsilon must lie in [0, 1]");
}

std::vector<double>& QLearningAgent::row(const Percept& s) {
  auto it = table_.find(s);
  if (it == table_.end()) it = table_.emplace(s, std::vector<double>(static_cast<std::size_t>(num_actions_), init_)).first;
  return it->second;
}

double QLearningAgent::q(const Percept& s, Action a) const {
  auto it = table_.find(s);
  return it == table_.end() ? init_ : it->second.at(static_cast<std::size_t>(a));
}

void QLearningAgent::set_q(const Percept& s, Action a, double v) { row(s).at(static_cast<std::size_t>(a)) = v; }

void QLearningAgent::learn(const Percept& s, Action a, double r, const Percept& s2) {
  const std::vector<double>& next = row(s2);
  const double target = r + gamma_ * *std::max_element(next.begin(), next.end());
  double& v = row(s).at(static_cast<std::size_t>(a));
  v += alpha_ * (target - v);
}

void QLearningAgent::update(Action a, const Percept& e) {
  if (a != kNoAction && state_) learn(*state_, a, e.reward, e);
  state_ = e;
  last_info_gain_ = 0.0;
}

Action QLearningAgent::select_action(RngStream& rng) {
  const auto n = static_cast<std::size_t>(num_actions_);
  if (rng.uniform() < epsilon_) return static_cast<Action>(rng.uniform_index(n));
  std::vector<Action> best;
  double best_v = -std::numeric_limits<double>::infinity();
  for (Action a = 0; a < num_actions_; ++a) {
    const double v = state_ ? q(*state_, a) : init_;
    if (v > best_v) {
      best_v = v;
      best.assign(1, a);
    } else if (v == best_v) {
      best.push_back(a);
    }
  }
  return best.size() == 1 ? best.front() : best[rng.uniform_index(best.size())];
}

}  // namespace grl
