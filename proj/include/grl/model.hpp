#pragma once

#include <any>
#include <cstdint>
#include <memory>

#include "grl/environment.hpp"

namespace grl {

struct ModelSnapshot {
  std::uint64_t owner = 0;
  std::any state;
};

// The agent's (possibly learned) model of its environment. Planning drives a
// model through perform / generate_percept / update and rewinds it with
// snapshot / restore.
class Model {
 public:
  virtual ~Model() = default;
  Model& operator=(const Model&) = delete;

  virtual int num_actions() const = 0;
  virtual RewardRange reward_range() const = 0;
  virtual void perform(Action a) = 0;
  virtual Percept generate_percept(RngStream& rng) const = 0;
  virtual double conditional(const Percept& e) const = 0;
  // Conditions on e, which followed perform(a) (a is kNoAction for the first
  // percept). Returns the predictive probability of e before conditioning.
  // Throws ModelInconsistency when that probability is zero.
  virtual double update(Action a, const Percept& e) = 0;
  // Current belief entropy in bits, and its value before any evidence.
  virtual double entropy() const = 0;
  virtual double prior_entropy() const = 0;
  virtual ModelSnapshot snapshot() const = 0;
  virtual void restore(const ModelSnapshot& s) = 0;
  virtual std::uint64_t state_hash() const = 0;

  std::uint64_t id() const { return id_; }

 protected:
  Model();
  // Copies and moves get a fresh identity.
  Model(const Model&);
  void check_owner(const ModelSnapshot& s) const;

 private:
  std::uint64_t id_;
};

// A single known environment used as a model (belief is a point mass).
class EnvironmentModel final : public Model {
 public:
  explicit EnvironmentModel(std::unique_ptr<Environment> env);

  int num_actions() const override { return env_->num_actions(); }
  RewardRange reward_range() const override { return env_->reward_range(); }
  void perform(Action a) override { env_->perform(a); }
  Percept generate_percept(RngStream& rng) const override { return env_->generate_percept(rng); }
  double conditional(const Percept& e) const override { return env_->conditional(e); }
  double update(Action a, const Percept& e) override;
  double entropy() const override { return 0.0; }
  double prior_entropy() const override { return 0.0; }
  ModelSnapshot snapshot() const override;
  void restore(const ModelSnapshot& s) override;
  std::uint64_t state_hash() const override { return env_->state_hash(); }

  const Environment& environment() const { return *env_; }

 private:
  std::unique_ptr<Environment> env_;
};

}  // namespace grl
