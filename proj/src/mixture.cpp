#include "grl/mixture.hpp"

#include <algorithm>

namespace grl {

MixtureModel::MixtureModel(std::vector<std::unique_ptr<Environment>> hypotheses, const FiniteDistribution& prior,
                           double underflow_clamp)
    : hyps_(std::move(hypotheses)), w_(prior.probabilities()), underflow_clamp_(underflow_clamp) {
  if (hyps_.empty()) throw ConfigError("mixture needs at least one hypothesis");
  if (w_.size() != hyps_.size()) throw ConfigError("mixture prior size does not match hypothesis count");
  for (const auto& h : hyps_) {
    if (!h) throw ConfigError("null hypothesis");
    if (h->num_actions() != hyps_.front()->num_actions()) throw ConfigError("hypotheses disagree on action count");
  }
  if (underflow_clamp_ < 0.0) throw ConfigError("underflow clamp must be non-negative");
  scratch_.resize(hyps_.size());
  prior_entropy_ = entropy_bits(w_);
  count_support();
}

void MixtureModel::count_support() {
  support_ = static_cast<std::size_t>(std::count_if(w_.begin(), w_.end(), [](double x) { return x > 0.0; }));
}

int MixtureModel::num_actions() const { return hyps_.front()->num_actions(); }

RewardRange MixtureModel::reward_range() const {
  RewardRange r = hyps_.front()->reward_range();
  for (const auto& h : hyps_) {
    const RewardRange q = h->reward_range();
    r.min = std::min(r.min, q.min);
    r.max = std::max(r.max, q.max);
  }
  return r;
}

void MixtureModel::perform(Action a) {
  for (auto& h : hyps_) h->perform(a);
}

Percept MixtureModel::generate_percept(RngStream& rng) const {
  const std::size_t rho = support_ == 1 ? first_supported() : sample_categorical(w_, rng);
  return hyps_[rho]->generate_percept(rng);
}

double MixtureModel::conditional(const Percept& e) const {
  double xi = 0.0;
  for (std::size_t i = 0; i < hyps_.size(); ++i)
    if (w_[i] > 0.0) xi += w_[i] * hyps_[i]->conditional(e);
  return xi;
}

double MixtureModel::update(Action, const Percept& e) {
  double xi = 0.0;
  for (std::size_t i = 0; i < hyps_.size(); ++i) {
    scratch_[i] = w_[i] > 0.0 ? hyps_[i]->conditional(e) : 0.0;
    xi += w_[i] * scratch_[i];
  }
  if (!(xi > 0.0)) throw ModelInconsistency("percept has zero probability under every hypothesis");
  double total = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    double w = w_[i] * scratch_[i] / xi;
    if (w < underflow_clamp_) w = 0.0;
    w_[i] = w;
    total += w;
  }
  if (!(total > 0.0)) throw ModelInconsistency("posterior underflowed to zero");
  for (double& w : w_) w /= total;
  count_support();
  return xi;
}

double MixtureModel::entropy() const { return entropy_bits(w_); }

std::size_t MixtureModel::first_supported() const {
  for (std::size_t i = 0; i < w_.size(); ++i)
    if (w_[i] > 0.0) return i;
  return w_.size();
}

ModelSnapshot MixtureModel::snapshot() const {
  State s;
  s.w = w_;
  s.support = support_;
  s.hyps.reserve(hyps_.size());
  for (const auto& h : hyps_) s.hyps.push_back(h->snapshot());
  return {id(), std::move(s)};
}

void MixtureModel::restore(const ModelSnapshot& snap) {
  check_owner(snap);
  const auto& s = std::any_cast<const State&>(snap.state);
  std::copy(s.w.begin(), s.w.end(), w_.begin());
  support_ = s.support;
  for (std::size_t i = 0; i < hyps_.size(); ++i) hyps_[i]->restore(s.hyps[i]);
}

std::uint64_t MixtureModel::state_hash() const {
  std::uint64_t h = mix64(hyps_.size());
  for (std::size_t i = 0; i < hyps_.size(); ++i) {
    h = hash_combine(h, hash_double(w_[i]));
    h = hash_combine(h, hyps_[i]->state_hash());
  }
  return h;
}

double info_gain(std::span<const double> before, std::span<const double> after) {
  if (before.size() != after.size()) throw ConfigError("info_gain: weight vectors differ in length");
  return entropy_bits(before) - entropy_bits(after);
}

GridSpec strip_dispensers(GridSpec g) {
  for (Tile& t : g.tiles)
    if (t.kind == TileKind::dispenser) t = {TileKind::empty, 0.0};
  return g;
}

MixtureModel build_dispenser_class(const ModelClassSpec& spec, double underflow_clamp) {
  if (!(spec.theta > 0.0 && spec.theta <= 1.0)) throw ConfigError("dispenser class: theta must lie in (0, 1]");
  const GridSpec base = strip_dispensers(spec.base_grid);
  base.validate(false);
  std::vector<std::unique_ptr<Environment>> hyps;
  for (int r = 0; r < base.size; ++r)
    for (int c = 0; c < base.size; ++c) {
      if (base.at(r, c).kind == TileKind::wall) continue;
      GridSpec g = base;
      g.at(r, c) = {TileKind::dispenser, spec.theta};
      hyps.push_back(std::make_unique<Gridworld>(std::move(g)));
    }
  if (hyps.size() < 2) throw ConfigError("dispenser class needs at least two open tiles");
  const std::size_t n = hyps.size();
  return MixtureModel(std::move(hyps), FiniteDistribution::uniform(n), underflow_clamp);
}

std::size_t dispenser_hypothesis_index(const GridSpec& base, Coord where) {
  if (!base.in_bounds(where.row, where.col) || base.at(where.row, where.col).kind == TileKind::wall)
    throw ConfigError("dispenser position is not an open tile");
  std::size_t idx = 0;
  for (int r = 0; r < base.size; ++r)
    for (int c = 0; c < base.size; ++c) {
      if (base.at(r, c).kind == TileKind::wall) continue;
      if (r == where.row && c == where.col) return idx;
      ++idx;
    }
  return idx;
}

std::vector<double> build_dogmatic_prior(std::size_t class_size, const std::vector<std::size_t>& trap_hypotheses,
                                         double mass) {
  if (!(mass > 0.0 && mass < 1.0)) throw ConfigError("dogmatic mass must lie in (0, 1)");
  if (trap_hypotheses.empty() || trap_hypotheses.size() >= class_size)
    throw ConfigError("dogmatic prior needs trap and non-trap hypotheses");
  std::vector<char> is_trap(class_size, 0);
  for (std::size_t i : trap_hypotheses) {
    if (i >= class_size) throw ConfigError("trap hypothesis index out of range");
    if (is_trap[i]) throw ConfigError("duplicate trap hypothesis index");
    is_trap[i] = 1;
  }
  const double trap_w = mass / static_cast<double>(trap_hypotheses.size());
  const double rest_w = (1.0 - mass) / static_cast<double>(class_size - trap_hypotheses.size());
  std::vector<double> w(class_size);
  for (std::size_t i = 0; i < class_size; ++i) w[i] = is_trap[i] ? trap_w : rest_w;
  return w;
}

std::vector<Coord> dogmatic_trap_tiles(const GridSpec& base) {
  std::vector<Coord> out;
  for (int a = 0; a < kObservationWallBits; ++a) {
    const int r = base.start.row + kDeltaRow[a];
    const int c = base.start.col + kDeltaCol[a];
    if (base.in_bounds(r, c) && base.at(r, c).kind != TileKind::wall) out.push_back({r, c});
  }
  return out;
}

MixtureModel build_dogmatic_class(const ModelClassSpec& spec, double mass, double underflow_clamp) {
  if (!(mass > 0.0 && mass < 1.0)) throw ConfigError("dogmatic mass must lie in (0, 1)");
  MixtureModel loc = build_dispenser_class(spec);
  const GridSpec base = strip_dispensers(spec.base_grid);
  std::vector<std::unique_ptr<Environment>> hyps;
  for (std::size_t i = 0; i < loc.size(); ++i) hyps.push_back(loc.hypothesis(i).clone());
  std::vector<std::size_t> traps;
  for (const Coord& c : dogmatic_trap_tiles(base)) {
    GridSpec g = base;
    g.at(c.row, c.col) = {TileKind::trap, 0.0};
    traps.push_back(hyps.size());
    hyps.push_back(std::make_unique<Gridworld>(std::move(g)));
  }
  if (traps.empty()) throw ConfigError("start has no open neighbour to believe a trap on");
  const auto prior = build_dogmatic_prior(hyps.size(), traps, mass);
  return MixtureModel(std::move(hyps), FiniteDistribution::normalized(prior), underflow_clamp);
}

}  // namespace grl
