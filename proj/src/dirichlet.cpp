#include "grl/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace grl {

namespace {
constexpr DirichletCounts kFreshOpen{1.0, 1.0, 0.0, 0.0};
constexpr DirichletCounts kHardWall{0.0, 0.0, 1.0, 0.0};

bool all_zero(const DirichletCounts& a) { return a[0] == 0.0 && a[1] == 0.0 && a[2] == 0.0 && a[3] == 0.0; }
}  // namespace

DirichletCounts dirichlet_mean(const DirichletCounts& alpha) {
  const double total = alpha[0] + alpha[1] + alpha[2] + alpha[3];
  if (total <= 0.0) return {0.25, 0.25, 0.25, 0.25};
  return {alpha[0] / total, alpha[1] / total, alpha[2] / total, alpha[3] / total};
}

double dispenser_surrogate_entropy(const std::vector<double>& q) {
  double total = 0.0;
  for (double x : q) total += x;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double x : q)
    if (x > 0.0) {
      const double p = x / total;
      h -= p * std::log2(p);
    }
  return h;
}

DirichletGridModel::DirichletGridModel(int n, GridRewards rewards, Coord start) : n_(n), rewards_(rewards) {
  if (n < 1) throw ConfigError("Dirichlet model: grid side must be positive");
  if (start.row < 0 || start.col < 0 || start.row >= n || start.col >= n)
    throw ConfigError("Dirichlet model: start out of bounds");
  state_.alpha.assign(static_cast<std::size_t>(n * n), DirichletCounts{0, 0, 0, 0});
  state_.row = start.row;
  state_.col = start.col;
  prior_entropy_ = entropy();
}

RewardRange DirichletGridModel::reward_range() const {
  return {std::min({rewards_.empty, rewards_.wall, rewards_.cake}),
          std::max({rewards_.empty, rewards_.wall, rewards_.cake})};
}

double DirichletGridModel::prob_empty(int r, int c) const { return dirichlet_mean(counts(r, c))[kClassEmpty]; }
double DirichletGridModel::prob_dispenser(int r, int c) const {
  return dirichlet_mean(counts(r, c))[kClassDispenser];
}
double DirichletGridModel::prob_wall(int r, int c) const { return dirichlet_mean(counts(r, c))[kClassWall]; }

void DirichletGridModel::perform(Action a) {
  if (a < 0 || a >= kGridActions) throw InvalidAction("gridworld action " + std::to_string(a));
  state_.bumped = false;
  if (a == kStay) return;
  const int r = state_.row + kDeltaRow[a];
  const int c = state_.col + kDeltaCol[a];
  if (r < 0 || c < 0 || r >= n_ || c >= n_ || state_.alpha[index(r, c)] == kHardWall) {
    state_.bumped = true;
    return;
  }
  state_.row = r;
  state_.col = c;
}

DirichletCounts DirichletGridModel::occupied_counts() const {
  const DirichletCounts& a = state_.alpha[index(state_.row, state_.col)];
  return all_zero(a) ? kFreshOpen : a;
}

Percept DirichletGridModel::generate_percept(RngStream& rng) const {
  Percept e;
  for (int k = 0; k < kObservationWallBits; ++k) {
    const int r = state_.row + kDeltaRow[k];
    const int c = state_.col + kDeltaCol[k];
    const double pw = (r < 0 || c < 0 || r >= n_ || c >= n_) ? 1.0 : dirichlet_mean(state_.alpha[index(r, c)])[kClassWall];
    if (pw >= 1.0 || (pw > 0.0 && rng.uniform() < pw)) e.observation |= (1ULL << k);
  }
  if (state_.bumped) {
    e.reward = rewards_.wall;
    return e;
  }
  const DirichletCounts mu = dirichlet_mean(occupied_counts());
  const double u = rng.uniform();
  if (u < mu[kClassEmpty]) {
    e.reward = rewards_.empty;
  } else if (u < mu[kClassEmpty] + mu[kClassDispenser]) {
    e.reward = rewards_.cake;
  } else {
    e.reward = rewards_.wall;
  }
  return e;
}

double DirichletGridModel::conditional(const Percept& e) const {
  if ((e.observation >> kObservationWallBits) != 0) return 0.0;
  double p = 1.0;
  for (int k = 0; k < kObservationWallBits; ++k) {
    const int r = state_.row + kDeltaRow[k];
    const int c = state_.col + kDeltaCol[k];
    const double pw = (r < 0 || c < 0 || r >= n_ || c >= n_) ? 1.0 : dirichlet_mean(state_.alpha[index(r, c)])[kClassWall];
    p *= ((e.observation >> k) & 1ULL) ? pw : 1.0 - pw;
    if (p == 0.0) return 0.0;
  }
  if (state_.bumped) return e.reward == rewards_.wall ? p : 0.0;
  const DirichletCounts mu = dirichlet_mean(occupied_counts());
  double pr = 0.0;
  if (e.reward == rewards_.empty) pr += mu[kClassEmpty];
  if (e.reward == rewards_.cake) pr += mu[kClassDispenser];
  if (e.reward == rewards_.wall) pr += mu[kClassWall] + mu[kClassTrap];
  return p * pr;
}

double DirichletGridModel::update(Action, const Percept& e) {
  const double p = conditional(e);
  if (!(p > 0.0)) throw ModelInconsistency("percept has zero probability under the Dirichlet model");
  for (int k = 0; k < kObservationWallBits; ++k) {
    const int r = state_.row + kDeltaRow[k];
    const int c = state_.col + kDeltaCol[k];
    if (r < 0 || c < 0 || r >= n_ || c >= n_) continue;
    DirichletCounts& a = state_.alpha[index(r, c)];
    if ((e.observation >> k) & 1ULL) {
      a = kHardWall;
    } else if (all_zero(a)) {
      a = kFreshOpen;
    }
  }
  if (!state_.bumped) {
    DirichletCounts& a = state_.alpha[index(state_.row, state_.col)];
    if (all_zero(a)) a = kFreshOpen;
    if (e.reward == rewards_.cake) {
      a[kClassDispenser] += 1.0;
    } else if (e.reward == rewards_.empty) {
      a[kClassEmpty] += 1.0;
    } else if (e.reward == rewards_.wall) {
      a[kClassTrap] += 1.0;
    }
  }
  return p;
}

double DirichletGridModel::entropy() const {
  q_.resize(state_.alpha.size());
  bool any = false;
  for (std::size_t i = 0; i < q_.size(); ++i) {
    q_[i] = dirichlet_mean(state_.alpha[i])[kClassDispenser];
    any = any || q_[i] > 0.0;
  }
  if (!any && !warned_) {
    std::fprintf(stderr, "warning: Dirichlet model rules out a dispenser on every tile\n");
    warned_ = true;
  }
  return dispenser_surrogate_entropy(q_);
}

ModelSnapshot DirichletGridModel::snapshot() const { return {id(), state_}; }

void DirichletGridModel::restore(const ModelSnapshot& snap) {
  check_owner(snap);
  const auto& s = std::any_cast<const State&>(snap.state);
  std::copy(s.alpha.begin(), s.alpha.end(), state_.alpha.begin());
  state_.row = s.row;
  state_.col = s.col;
  state_.bumped = s.bumped;
}

std::uint64_t DirichletGridModel::state_hash() const {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(state_.row * n_ + state_.col) * 2 + (state_.bumped ? 1 : 0));
  for (const auto& a : state_.alpha)
    for (double x : a) h = hash_combine(h, hash_double(x));
  return h;
}

}  // namespace grl
