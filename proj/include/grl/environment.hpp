#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "grl/core.hpp"

namespace grl {

struct GridState {
  int row = 0;
  int col = 0;
  bool bumped = false;
  bool trapped = false;
  bool wireheaded = false;
  friend bool operator==(const GridState&, const GridState&) = default;
};

struct ChainState {
  int state = 0;
  double last_reward = 0.0;
  friend bool operator==(const ChainState&, const ChainState&) = default;
};

struct EnvSnapshot {
  std::uint64_t owner = 0;
  std::variant<GridState, ChainState> state;
};

// A (possibly stochastic) environment. perform() advances the hidden state;
// the percept it produces is drawn by generate_percept() and has probability
// conditional(e). Both are pure functions of the hidden state.
class Environment {
 public:
  virtual ~Environment() = default;
  Environment& operator=(const Environment&) = delete;

  virtual int num_actions() const = 0;
  virtual RewardRange reward_range() const = 0;
  virtual void perform(Action a) = 0;
  virtual Percept generate_percept(RngStream& rng) const = 0;
  virtual double conditional(const Percept& e) const = 0;
  // Every percept with non-zero probability from any reachable state.
  virtual std::vector<Percept> percept_space() const = 0;
  virtual EnvSnapshot snapshot() const = 0;
  // Throws SnapshotMismatch for a snapshot taken from a different instance.
  virtual void restore(const EnvSnapshot& s) = 0;
  // The copy gets a fresh identity; snapshots do not transfer between them.
  virtual std::unique_ptr<Environment> clone() const = 0;
  virtual std::uint64_t state_hash() const = 0;

  std::uint64_t id() const { return id_; }

 protected:
  Environment();
  Environment(const Environment&);

  void check_owner(const EnvSnapshot& s) const;

 private:
  std::uint64_t id_;
};

}  // namespace grl
