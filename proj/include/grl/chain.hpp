#pragma once

#include "grl/environment.hpp"

namespace grl {

enum ChainAction : Action { kChainReset = 0, kChainAdvance = 1 };

struct ChainSpec {
  int n = 6;
  double r0 = 0.0;
  double ri = 4.0;
  double rb = 1000.0;
  void validate() const;
};

// States 0..N, start 0, fully observable (observation = state).
// Reset (index 0) returns to 0 paying ri. Advance (index 1) moves s -> s+1
// paying r0, except that entering N pays rb; advance from N loops to 1
// paying r0. The rewarding circuit 1..N therefore has length N and a
// reward of rb lies exactly N advances from the start.
class Chain final : public Environment {
 public:
  explicit Chain(ChainSpec spec);

  int num_actions() const override { return 2; }
  RewardRange reward_range() const override;
  void perform(Action a) override;
  Percept generate_percept(RngStream& rng) const override;
  double conditional(const Percept& e) const override;
  std::vector<Percept> percept_space() const override;
  EnvSnapshot snapshot() const override;
  void restore(const EnvSnapshot& s) override;
  std::unique_ptr<Environment> clone() const override;
  std::uint64_t state_hash() const override;

  const ChainSpec& spec() const { return spec_; }
  int state() const { return state_.state; }

 private:
  Chain(const Chain&) = default;

  ChainSpec spec_;
  ChainState state_;
};

// Successor state and reward of one transition.
ChainState chain_transition(const ChainSpec& spec, int s, Action a);

}  // namespace grl
