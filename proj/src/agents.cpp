#include "grl/agents.hpp"

#include <algorithm>
#include <cmath>

#include "grl/chain.hpp"
#include "grl/dirichlet.hpp"

namespace grl {

namespace {

struct KindName {
  AgentKind kind;
  std::string_view name;
};
constexpr KindName kAgentNames[] = {
    {AgentKind::aimu, "aimu"},         {AgentKind::aixi, "aixi"},         {AgentKind::square, "square"},
    {AgentKind::shannon, "shannon"},   {AgentKind::kl, "kl"},             {AgentKind::bayesexp, "bayesexp"},
    {AgentKind::thompson, "thompson"}, {AgentKind::mdl, "mdl"},           {AgentKind::qlearn, "qlearn"},
};

struct ModelName {
  ModelKind kind;
  std::string_view name;
};
constexpr ModelName kModelNames[] = {
    {ModelKind::loc, "loc"}, {ModelKind::dirichlet, "dirichlet"}, {ModelKind::truth, "truth"},
    {ModelKind::dogmatic, "dogmatic"}};

}  // namespace

AgentKind parse_agent_kind(std::string_view s) {
  for (const auto& k : kAgentNames)
    if (k.name == s) return k.kind;
  throw ConfigError("unknown agent kind '" + std::string(s) + "'");
}

ModelKind parse_model_kind(std::string_view s) {
  for (const auto& k : kModelNames)
    if (k.name == s) return k.kind;
  throw ConfigError("unknown model '" + std::string(s) + "'");
}

std::string_view to_string(AgentKind k) {
  for (const auto& n : kAgentNames)
    if (n.kind == k) return n.name;
  return "?";
}

std::string_view to_string(ModelKind k) {
  for (const auto& n : kModelNames)
    if (n.kind == k) return n.name;
  return "?";
}

PlannerConfig AgentConfig::planner(RewardRange range) const {
  PlannerConfig p;
  p.horizon = horizon;
  p.samples = samples;
  p.ucb = ucb;
  p.gamma = gamma;
  p.undiscounted = undiscounted;
  p.utility_range = range;
  return p;
}

PlanningAgent::PlanningAgent(std::string name, std::unique_ptr<Model> model, UtilityKind utility,
                             const AgentConfig& cfg)
    : name_(std::move(name)),
      model_(std::move(model)),
      planner_(cfg.planner(utility_range(utility, *model_)), utility) {}

double PlanningAgent::observe(Action a, const Percept& e) {
  if (a != kNoAction) model_->perform(a);
  const double before = model_->entropy();
  model_->update(a, e);
  last_info_gain_ = before - model_->entropy();
  return last_info_gain_;
}

void PlanningAgent::update(Action a, const Percept& e) {
  const double ig = observe(a, e);
  if (a == kNoAction) {
    planner_.reset();
  } else {
    planner_.advance(a, e, ig);
  }
}

Action PlanningAgent::select_action(RngStream& rng) { return planner_.plan(*model_, rng); }

BayesExpAgent::BayesExpAgent(std::unique_ptr<Model> model, const AgentConfig& cfg)
    : PlanningAgent("bayesexp", std::move(model), UtilityKind::reward, cfg),
      ig_planner_(cfg.planner(utility_range(UtilityKind::kl, *model_)), UtilityKind::kl),
      eps0_(cfg.eps0.value_or(0.05 * model_->prior_entropy())),
      horizon_(cfg.horizon) {
  if (eps0_ < 0.0) throw ConfigError("BayesExp eps0 must be non-negative");
}

double BayesExpAgent::epsilon(int t) const { return eps0_ / std::sqrt(static_cast<double>(std::max(t, 1))); }

void BayesExpAgent::update(Action a, const Percept& e) {
  PlanningAgent::update(a, e);
  ++t_;
}

Action BayesExpAgent::select_action(RngStream& rng) {
  RngStream explore_rng = rng.split(kStreamExplore);
  // The information-gain tree is rebuilt every cycle so that its root values
  // always cover exactly m steps from now.
  ig_planner_.reset();
  const Action explore_action = ig_planner_.plan(*model_, explore_rng);
  const double h_root = model_->entropy();
  // Root values are sums of -Ent(posterior); shifting by the current entropy
  // turns them into discounted information gain.
  const PlannerConfig& ic = ig_planner_.config();
  const double steps = ic.undiscounted ? horizon_ : GeometricDiscount(ic.gamma).partial_sum(horizon_);
  last_ig_value_ = ig_planner_.best_value().value_or(0.0) + h_root * steps;
  if (explore_left_ > 0) {
    --explore_left_;
    last_explore_ = true;
    return explore_action;
  }
  if (*last_ig_value_ > epsilon(t_)) {
    explore_left_ = horizon_ - 1;
    last_explore_ = true;
    return explore_action;
  }
  last_explore_ = false;
  return planner_.plan(*model_, rng);
}

HypothesisAgent::HypothesisAgent(Rule rule, std::unique_ptr<MixtureModel> model, const AgentConfig& cfg)
    : rule_(rule),
      mixture_(std::move(model)),
      planner_(cfg.planner(mixture_->reward_range()), UtilityKind::reward),
      horizon_(cfg.horizon) {}

void HypothesisAgent::update(Action a, const Percept& e) {
  if (a != kNoAction) mixture_->perform(a);
  const double before = mixture_->entropy();
  mixture_->update(a, e);
  last_info_gain_ = before - mixture_->entropy();
  // The planner's model is a single hypothesis, which learns nothing.
  if (a == kNoAction) {
    planner_.reset();
  } else {
    planner_.advance(a, e, 0.0);
  }
}

Action HypothesisAgent::select_action(RngStream& rng) {
  std::size_t next = 0;
  if (rule_ == Rule::thompson) {
    if (commit_left_ > 0 && rho_) {
      next = *rho_;
    } else {
      RngStream draw = rng.split(kStreamResample);
      next = sample_categorical(mixture_->weights(), draw);
      commit_left_ = horizon_;
      ++resamples_;
      planned_since_resample_.clear();
    }
    --commit_left_;
  } else {
    next = mixture_->first_supported();
    if (next >= mixture_->size()) throw ModelInconsistency("every hypothesis has been falsified");
  }
  if (!rho_ || *rho_ != next) planner_.reset();
  rho_ = next;
  if (std::find(planned_since_resample_.begin(), planned_since_resample_.end(), next) ==
      planned_since_resample_.end())
    planned_since_resample_.push_back(next);
  EnvironmentModel rho_model(mixture_->hypothesis(next).clone());
  return planner_.plan(rho_model, rng);
}

std::unique_ptr<Agent> make_agent(const AgentConfig& cfg, const Environment& truth) {
  if (cfg.kind == AgentKind::qlearn) return std::make_unique<QLearningAgent>(truth.num_actions(), cfg);
  if (cfg.kind == AgentKind::aimu)
    return std::make_unique<PlanningAgent>("aimu", std::make_unique<EnvironmentModel>(truth.clone()),
                                           UtilityKind::reward, cfg);

  const auto* grid = dynamic_cast<const Gridworld*>(&truth);
  if (grid == nullptr) throw ConfigError("agent '" + std::string(to_string(cfg.kind)) + "' needs a gridworld");
  const GridSpec& spec = grid->spec();
  double theta = 1.0;
  for (const Tile& t : spec.tiles)
    if (t.kind == TileKind::dispenser) {
      theta = t.theta;
      break;
    }
  const ModelClassSpec cls{spec, cfg.theta.value_or(theta)};

  auto mixture = [&]() -> std::unique_ptr<MixtureModel> {
    switch (cfg.model) {
      case ModelKind::loc: return std::make_unique<MixtureModel>(build_dispenser_class(cls, cfg.underflow_clamp));
      case ModelKind::dogmatic: return std::make_unique<MixtureModel>(build_dogmatic_class(cls, cfg.dogmatic_mass, cfg.underflow_clamp));
      case ModelKind::truth: {
        std::vector<std::unique_ptr<Environment>> one;
        one.push_back(truth.clone());
        return std::make_unique<MixtureModel>(std::move(one), FiniteDistribution::uniform(1),
                                                cfg.underflow_clamp);
      }
      case ModelKind::dirichlet: break;
    }
    throw ConfigError("agent '" + std::string(to_string(cfg.kind)) + "' needs a mixture model class");
  };
  auto any_model = [&]() -> std::unique_ptr<Model> {
    if (cfg.model == ModelKind::dirichlet)
      return std::make_unique<DirichletGridModel>(spec.size, spec.rewards, spec.start);
    return mixture();
  };

  switch (cfg.kind) {
    case AgentKind::aixi: return std::make_unique<PlanningAgent>("aixi", any_model(), UtilityKind::reward, cfg);
    case AgentKind::square: return std::make_unique<PlanningAgent>("square", any_model(), UtilityKind::square, cfg);
    case AgentKind::shannon:
      return std::make_unique<PlanningAgent>("shannon", any_model(), UtilityKind::shannon, cfg);
    case AgentKind::kl: return std::make_unique<PlanningAgent>("kl", any_model(), UtilityKind::kl, cfg);
    case AgentKind::bayesexp: return std::make_unique<BayesExpAgent>(any_model(), cfg);
    case AgentKind::thompson:
      return std::make_unique<HypothesisAgent>(HypothesisAgent::Rule::thompson, mixture(), cfg);
    case AgentKind::mdl: return std::make_unique<HypothesisAgent>(HypothesisAgent::Rule::mdl, mixture(), cfg);
    default: break;
  }
  throw ConfigError("unsupported agent kind");
}

}  // namespace grl
