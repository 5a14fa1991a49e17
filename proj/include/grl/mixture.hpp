#pragma once

#include <memory>
#include <span>
#include <vector>

#include "grl/gridworld.hpp"
#include "grl/model.hpp"

namespace grl {

inline constexpr double kDefaultUnderflowClamp = 1e-300;

// Bayes mixture over a finite, ordered list of environments.
class MixtureModel final : public Model {
 public:
  MixtureModel(std::vector<std::unique_ptr<Environment>> hypotheses, const FiniteDistribution& prior,
               double underflow_clamp = kDefaultUnderflowClamp);

  int num_actions() const override;
  RewardRange reward_range() const override;
  // Applies a to every hypothesis.
  void perform(Action a) override;
  // Ancestral sampling: rho ~ w, then e ~ rho. No draw is spent on rho when
  // the posterior is a point mass.
  Percept generate_percept(RngStream& rng) const override;
  double conditional(const Percept& e) const override;
  double update(Action a, const Percept& e) override;
  double entropy() const override;
  double prior_entropy() const override { return prior_entropy_; }
  ModelSnapshot snapshot() const override;
  void restore(const ModelSnapshot& s) override;
  std::uint64_t state_hash() const override;

  std::size_t size() const { return hyps_.size(); }
  const std::vector<double>& weights() const { return w_; }
  const Environment& hypothesis(std::size_t i) const { return *hyps_[i]; }
  // Lowest index with positive weight.
  std::size_t first_supported() const;

 private:
  struct State {
    std::vector<double> w;
    std::vector<EnvSnapshot> hyps;
    std::size_t support = 0;
  };

  void count_support();

  std::vector<std::unique_ptr<Environment>> hyps_;
  std::vector<double> w_;
  std::vector<double> scratch_;
  std::size_t support_ = 0;
  double underflow_clamp_;
  double prior_entropy_;
};

// Entropy before minus entropy after, in bits.
double info_gain(std::span<const double> before, std::span<const double> after);

struct ModelClassSpec {
  GridSpec base_grid;  // dispensers are ignored
  double theta = 0.75;
};

GridSpec strip_dispensers(GridSpec g);

// One hypothesis per non-wall tile, in row-major order, each placing a single
// Dispenser(theta) on that tile. Uniform prior.
MixtureModel build_dispenser_class(const ModelClassSpec& spec, double underflow_clamp = kDefaultUnderflowClamp);

// Index of the class member whose dispenser sits at `where`.
std::size_t dispenser_hypothesis_index(const GridSpec& base, Coord where);

// Prior of total mass `mass` split evenly over `trap_hypotheses`, the rest
// uniform over the others.
std::vector<double> build_dogmatic_prior(std::size_t class_size, const std::vector<std::size_t>& trap_hypotheses,
                                         double mass);

// The dispenser class followed by one hypothesis per open tile next to the
// start, in which that tile is a Trap (and no dispenser exists). Prior from
// build_dogmatic_prior.
MixtureModel build_dogmatic_class(const ModelClassSpec& spec, double mass,
                                   double underflow_clamp = kDefaultUnderflowClamp);

// Tiles that the dogmatic class believes could be traps.
std::vector<Coord> dogmatic_trap_tiles(const GridSpec& base);

}  // namespace grl
