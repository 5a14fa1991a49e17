#include "grl/value_iteration.hpp"

#include <algorithm>
#include <cmath>

namespace grl {

void FiniteMdp::validate() const {
  if (num_states < 1 || num_actions < 1) throw ConfigError("MDP needs states and actions");
  const auto sa = static_cast<std::size_t>(num_states * num_actions);
  if (transition.size() != sa * static_cast<std::size_t>(num_states) || reward.size() != sa)
    throw ConfigError("MDP tensor sizes do not match");
  for (int s = 0; s < num_states; ++s)
    for (int a = 0; a < num_actions; ++a) {
      double total = 0.0;
      for (int s2 = 0; s2 < num_states; ++s2) {
        const double x = p(s, a, s2);
        if (!(x >= 0.0)) throw ConfigError("MDP transition has a negative entry");
        total += x;
      }
      if (std::abs(total - 1.0) > 1e-9) throw ConfigError("MDP transition row is not stochastic");
    }
}

ValueIterationResult value_iteration(const FiniteMdp& mdp, double gamma, double tol) {
  mdp.validate();
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("value_iteration: gamma must lie in [0, 1)");
  if (!(tol > 0.0)) throw ConfigError("value_iteration: tol must be positive");
  const int S = mdp.num_states;
  const int A = mdp.num_actions;
  ValueIterationResult out;
  out.value.assign(static_cast<std::size_t>(S), 0.0);
  out.policy.assign(static_cast<std::size_t>(S), 0);
  std::vector<double> next(static_cast<std::size_t>(S));

  auto q = [&](const std::vector<double>& v, int s, int a) {
    double x = mdp.r(s, a);
    for (int s2 = 0; s2 < S; ++s2) x += gamma * mdp.p(s, a, s2) * v[static_cast<std::size_t>(s2)];
    return x;
  };

  for (;;) {
    double delta = 0.0;
    for (int s = 0; s < S; ++s) {
      double best = q(out.value, s, 0);
      for (int a = 1; a < A; ++a) best = std::max(best, q(out.value, s, a));
      delta = std::max(delta, std::abs(best - out.value[static_cast<std::size_t>(s)]));
      next[static_cast<std::size_t>(s)] = best;
    }
    out.value.swap(next);
    ++out.iterations;
    if (delta < tol) break;
  }
  for (int s = 0; s < S; ++s) {
    double best = q(out.value, s, 0);
    Action arg = 0;
    for (int a = 1; a < A; ++a) {
      const double x = q(out.value, s, a);
      if (x > best) {
        best = x;
        arg = a;
      }
    }
    out.policy[static_cast<std::size_t>(s)] = arg;
  }
  return out;
}

FiniteMdp chain_mdp(const ChainSpec& spec) {
  spec.validate();
  FiniteMdp mdp;
  mdp.num_states = spec.n + 1;
  mdp.num_actions = 2;
  mdp.transition.assign(static_cast<std::size_t>(mdp.num_states * 2 * mdp.num_states), 0.0);
  mdp.reward.assign(static_cast<std::size_t>(mdp.num_states * 2), 0.0);
  for (int s = 0; s < mdp.num_states; ++s)
    for (Action a = 0; a < 2; ++a) {
      const ChainState next = chain_transition(spec, s, a);
      mdp.transition[static_cast<std::size_t>((s * 2 + a) * mdp.num_states + next.state)] = 1.0;
      mdp.reward[static_cast<std::size_t>(s * 2 + a)] = next.last_reward;
    }
  return mdp;
}

}  // namespace grl
