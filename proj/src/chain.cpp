#include "grl/chain.hpp"

#include <algorithm>
#include <string>

namespace grl {

void ChainSpec::validate() const {
  if (n < 1) throw ConfigError("chain length must be positive");
}

ChainState chain_transition(const ChainSpec& spec, int s, Action a) {
  if (a == kChainReset) return {0, spec.ri};
  if (a != kChainAdvance) throw InvalidAction("chain action " + std::to_string(a));
  if (s >= spec.n) return {1, spec.r0};
  if (s + 1 == spec.n) return {spec.n, spec.rb};
  return {s + 1, spec.r0};
}

Chain::Chain(ChainSpec spec) : spec_(spec) {
  spec_.validate();
  state_ = {0, spec_.r0};
}

RewardRange Chain::reward_range() const {
  return {std::min({spec_.r0, spec_.ri, spec_.rb}), std::max({spec_.r0, spec_.ri, spec_.rb})};
}

void Chain::perform(Action a) { state_ = chain_transition(spec_, state_.state, a); }

Percept Chain::generate_percept(RngStream&) const {
  return {static_cast<std::uint64_t>(state_.state), state_.last_reward};
}

double Chain::conditional(const Percept& e) const {
  return e.observation == static_cast<std::uint64_t>(state_.state) && e.reward == state_.last_reward ? 1.0 : 0.0;
}

std::vector<Percept> Chain::percept_space() const {
  std::vector<double> rewards{spec_.r0, spec_.ri, spec_.rb};
  std::sort(rewards.begin(), rewards.end());
  rewards.erase(std::unique(rewards.begin(), rewards.end()), rewards.end());
  std::vector<Percept> out;
  for (int s = 0; s <= spec_.n; ++s)
    for (double r : rewards) out.push_back({static_cast<std::uint64_t>(s), r});
  return out;
}

EnvSnapshot Chain::snapshot() const { return {id(), state_}; }

void Chain::restore(const EnvSnapshot& s) {
  check_owner(s);
  const auto* st = std::get_if<ChainState>(&s.state);
  if (st == nullptr) throw SnapshotMismatch("not a chain snapshot");
  state_ = *st;
}

std::unique_ptr<Environment> Chain::clone() const { return std::unique_ptr<Environment>(new Chain(*this)); }

std::uint64_t Chain::state_hash() const {
  return hash_combine(mix64(static_cast<std::uint64_t>(state_.state)), hash_double(state_.last_reward));
}

}  // namespace grl
