#pragma once

#include <vector>

#include "grl/chain.hpp"

namespace grl {

// Finite MDP with dense tensors: P[(s*A + a)*S + s'] and R[s*A + a].
struct FiniteMdp {
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> transition;
  std::vector<double> reward;

  double p(int s, int a, int s2) const {
    return transition[static_cast<std::size_t>((s * num_actions + a) * num_states + s2)];
  }
  double r(int s, int a) const { return reward[static_cast<std::size_t>(s * num_actions + a)]; }
  // Throws ConfigError unless every (s, a) row is a probability distribution.
  void validate() const;
};

struct ValueIterationResult {
  std::vector<double> value;
  std::vector<Action> policy;
  int iterations = 0;
};

// Iterates the Bellman optimality backup until the max-norm change drops below
// tol. Greedy ties go to the lowest action index. gamma must lie in [0, 1).
ValueIterationResult value_iteration(const FiniteMdp& mdp, double gamma, double tol);

// The chain as a deterministic MDP over states 0..N.
FiniteMdp chain_mdp(const ChainSpec& spec);

}  // namespace grl
