#pragma once

#include <array>
#include <vector>

#include "grl/gridworld.hpp"
#include "grl/model.hpp"

namespace grl {

enum DirichletClass : int { kClassEmpty = 0, kClassDispenser = 1, kClassWall = 2, kClassTrap = 3 };
using DirichletCounts = std::array<double, 4>;

// Mean of a Dirichlet with counts alpha; all-zero counts have a uniform mean.
DirichletCounts dirichlet_mean(const DirichletCounts& alpha);

// Factorized per-tile Dirichlet model of a gridworld with known size, reward
// values and start. Position is tracked exactly. Noise symbols and
// wireheaded rewards are outside the model and get probability zero.
class DirichletGridModel final : public Model {
 public:
  DirichletGridModel(int n, GridRewards rewards, Coord start);

  int num_actions() const override { return kGridActions; }
  RewardRange reward_range() const override;
  void perform(Action a) override;
  Percept generate_percept(RngStream& rng) const override;
  double conditional(const Percept& e) const override;
  double update(Action a, const Percept& e) override;
  // Entropy of the normalized per-tile dispenser means.
  double entropy() const override;
  double prior_entropy() const override { return prior_entropy_; }
  ModelSnapshot snapshot() const override;
  void restore(const ModelSnapshot& s) override;
  std::uint64_t state_hash() const override;

  int size() const { return n_; }
  Coord position() const { return {state_.row, state_.col}; }
  const DirichletCounts& counts(int r, int c) const { return state_.alpha[index(r, c)]; }
  void set_counts(int r, int c, const DirichletCounts& alpha) { state_.alpha[index(r, c)] = alpha; }
  // Probability that the tile's reward class is Empty / Dispenser, and that it is a wall.
  double prob_empty(int r, int c) const;
  double prob_dispenser(int r, int c) const;
  double prob_wall(int r, int c) const;

 private:
  struct State {
    std::vector<DirichletCounts> alpha;
    int row = 0;
    int col = 0;
    bool bumped = false;
  };

  std::size_t index(int r, int c) const { return static_cast<std::size_t>(r * n_ + c); }
  // Counts of the occupied tile, with an unseen tile treated as freshly observed open.
  DirichletCounts occupied_counts() const;

  int n_;
  GridRewards rewards_;
  State state_;
  double prior_entropy_;
  mutable std::vector<double> q_;
  mutable bool warned_ = false;
};

// Entropy surrogate on raw per-tile dispenser weights q (normalized internally).
// Returns 0 for an all-zero vector.
double dispenser_surrogate_entropy(const std::vector<double>& q);

}  // namespace grl
