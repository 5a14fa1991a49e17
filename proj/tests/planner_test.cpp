#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <functional>

#include "grl/agents.hpp"
#include "grl/harness.hpp"
#include "grl/mixture.hpp"
#include "grl/planner.hpp"
#include "test_envs.hpp"

namespace {

using namespace grl;
using grl::testing::make_bandit;
using grl::testing::TableEnv;

PlannerConfig make_cfg(int horizon, int samples, double ucb, RewardRange range) {
  PlannerConfig c;
  c.horizon = horizon;
  c.samples = samples;
  c.ucb = ucb;
  c.utility_range = range;
  return c;
}

// Constant percept {0, u} whatever the action.
std::unique_ptr<Environment> constant_env(int actions, double u) {
  TableEnv::Outcomes o{{{0, u}, 1.0}};
  std::map<Action, TableEnv::Outcomes> by;
  for (Action a = 0; a < actions; ++a) by[a] = o;
  return std::make_unique<TableEnv>(actions, o, by);
}

TEST(UctScore, WorkedExample) {
  const PlannerConfig cfg = make_cfg(6, 1, 1.0, {-5.0, 100.0});
  DecisionNode parent;
  parent.visits = 12;
  parent.children.resize(2);
  parent.children[0] = std::make_unique<ChanceNode>();
  parent.children[1] = std::make_unique<ChanceNode>();
  parent.children[0]->value = 50.0;
  parent.children[0]->visits = 10;
  parent.children[1]->value = 40.0;
  parent.children[1]->visits = 2;
  const double oracle_a = 50.0 / (6 * 105.0) + std::sqrt(std::log(12.0) / 10.0);
  const double oracle_b = 40.0 / (6 * 105.0) + std::sqrt(std::log(12.0) / 2.0);
  EXPECT_NEAR(uct_score(parent, *parent.children[0], cfg), oracle_a, 1e-12);
  EXPECT_NEAR(uct_score(parent, *parent.children[1], cfg), oracle_b, 1e-12);
  EXPECT_NEAR(oracle_a, 0.578, 5e-4);
  EXPECT_NEAR(oracle_b, 1.178, 5e-4);
  RngStream rng(1);
  EXPECT_EQ(uct_select(parent, 2, cfg, rng), 1);
  const PlannerConfig greedy = make_cfg(6, 1, 0.01, {-5.0, 100.0});
  EXPECT_EQ(uct_select(parent, 2, greedy, rng), 0);
}

TEST(UctSelect, UnvisitedFirst) {
  const PlannerConfig cfg = make_cfg(6, 1, 1.0, {0.0, 1.0});
  DecisionNode node;
  node.visits = 100;
  node.children.resize(3);
  for (int a = 0; a < 3; ++a) node.children[a] = std::make_unique<ChanceNode>();
  node.children[0]->visits = 50;
  node.children[0]->value = 1e6;
  node.children[2]->visits = 50;
  node.children[2]->value = 1e6;
  RngStream rng(4);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(uct_select(node, 3, cfg, rng), 1);
  node.children[1].reset();
  for (int i = 0; i < 20; ++i) EXPECT_EQ(uct_select(node, 3, cfg, rng), 1);
}

TEST(RunningMean, BaseCases) {
  DecisionNode n;
  record_return(n, 7.5);
  EXPECT_EQ(n.visits, 1U);
  EXPECT_EQ(n.value, 7.5);
  ChanceNode c;
  record_return(c, 2.0);
  record_return(c, 4.0);
  EXPECT_EQ(c.visits, 2U);
  EXPECT_EQ(c.value, 3.0);
}

TEST(MctsSample, ZeroRemainingTouchesNothing) {
  EnvironmentModel model(constant_env(2, 1.0));
  const PlannerConfig cfg = make_cfg(3, 1, 1.0, {0.0, 1.0});
  DecisionNode node;
  RngStream rng(1);
  EXPECT_EQ(mcts_sample(node, model, 0, true, UtilityKind::reward, cfg, rng), 0.0);
  EXPECT_EQ(node.visits, 0U);
  EXPECT_TRUE(node.children.empty());
}

TEST(MctsSample, FreshNodeRecordsItsReturn) {
  EnvironmentModel model(constant_env(2, 1.0));
  PlannerConfig cfg = make_cfg(3, 1, 1.0, {0.0, 1.0});
  cfg.undiscounted = true;
  DecisionNode root;
  RngStream rng(1);
  const double ret = mcts_sample(root, model, 3, true, UtilityKind::reward, cfg, rng);
  EXPECT_EQ(ret, 3.0);
  EXPECT_EQ(root.visits, 1U);
  EXPECT_EQ(root.value, ret);
}

TEST(Rollout, Basics) {
  const PlannerConfig disc = make_cfg(5, 1, 1.0, {0.0, 1.0});
  PlannerConfig undisc = disc;
  undisc.undiscounted = true;
  EnvironmentModel model(constant_env(3, 0.5));
  RngStream rng(2);
  EXPECT_EQ(rollout(model, 0, UtilityKind::reward, disc, rng), 0.0);
  EXPECT_DOUBLE_EQ(rollout(model, 7, UtilityKind::reward, undisc, rng), 3.5);
  double geo = 0.0;
  for (int k = 0; k < 7; ++k) geo += 0.5 * std::pow(0.99, k);
  EXPECT_NEAR(rollout(model, 7, UtilityKind::reward, disc, rng), geo, 1e-12);

  auto bandit = make_bandit({0.3, 0.6, 0.9});
  EnvironmentModel m1(bandit->clone()), m2(bandit->clone());
  RngStream r1(55), r2(55);
  EXPECT_EQ(rollout(m1, 20, UtilityKind::reward, disc, r1), rollout(m2, 20, UtilityKind::reward, disc, r2));
}

TEST(Plan, DominantAction) {
  TableEnv::Outcomes zero{{{0, 0.0}, 1.0}}, one{{{0, 1.0}, 1.0}};
  EnvironmentModel model(std::make_unique<TableEnv>(2, zero, std::map<Action, TableEnv::Outcomes>{{0, zero}, {1, one}}));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Planner p(make_cfg(2, 100, 1.0, {0.0, 1.0}), UtilityKind::reward);
    RngStream rng(seed);
    EXPECT_EQ(p.plan(model, rng), 1);
  }
}

TEST(Plan, SamplesEqualToActionsVisitEveryAction) {
  EnvironmentModel model(constant_env(5, 0.0));
  Planner p(make_cfg(3, 5, 1.0, {0.0, 1.0}), UtilityKind::reward);
  RngStream rng(3);
  p.plan(model, rng);
  ASSERT_EQ(p.root().children.size(), 5U);
  for (const auto& c : p.root().children) {
    ASSERT_TRUE(c);
    EXPECT_EQ(c->visits, 1U);
  }
}

TEST(Plan, DepthOneMatchesExpectimaxOnDeterministicModels) {
  RngStream gen(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int na = 2 + static_cast<int>(gen.uniform_index(4));
    std::vector<double> pay(static_cast<std::size_t>(na));
    std::map<Action, TableEnv::Outcomes> by;
    for (Action a = 0; a < na; ++a) {
      pay[a] = std::round(gen.uniform() * 100.0);
      by[a] = {{{0, pay[a]}, 1.0}};
    }
    EnvironmentModel model(std::make_unique<TableEnv>(na, TableEnv::Outcomes{{{0, 0.0}, 1.0}}, by));
    const double best = *std::max_element(pay.begin(), pay.end());
    for (int kappa : {na, na + 1, 3 * na}) {
      Planner p(make_cfg(1, kappa, 1.0, {0.0, 100.0}), UtilityKind::reward);
      RngStream rng(static_cast<std::uint64_t>(trial * 10 + kappa));
      EXPECT_EQ(pay[p.plan(model, rng)], best);
    }
  }
}

TEST(Plan, TwoArmBandit) {
  auto bandit = make_bandit({0.8, 0.2});
  // Exact expectimax at depth 1 picks the arm with the larger mean.
  const Action oracle = 0;
  int correct = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    EnvironmentModel model(bandit->clone());
    Planner p(make_cfg(1, 600, 1.0, {0.0, 1.0}), UtilityKind::reward);
    RngStream rng(1000 + seed);
    correct += p.plan(model, rng) == oracle ? 1 : 0;
  }
  EXPECT_GE(correct, 95);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 10.0);
}

TEST(Plan, ModelStateIsPure) {
  const GridSpec g = load_grid(GRL_FIXTURE_DIR "/maze10.grid");
  MixtureModel m = build_dispenser_class({g, 0.75});
  Gridworld truth(g);
  RngStream rng(6);
  m.update(kNoAction, truth.generate_percept(rng));
  for (int t = 0; t < 5; ++t) {
    const auto before = m.state_hash();
    const auto w = m.weights();
    Planner p(make_cfg(6, 200, 1.0, m.reward_range()), UtilityKind::reward);
    const Action a = p.plan(m, rng);
    EXPECT_EQ(m.state_hash(), before);
    EXPECT_EQ(m.weights(), w);
    m.perform(a);
    truth.perform(a);
    m.update(a, truth.generate_percept(rng));
  }
}

void check_counts(const DecisionNode& node, bool is_root, int remaining) {
  std::uint64_t sum = 0;
  for (const auto& c : node.children) {
    if (!c) continue;
    sum += c->visits;
    std::uint64_t below = 0;
    for (const auto& [e, d] : c->children) {
      below += d->visits;
      check_counts(*d, false, remaining - 1);
    }
    if (remaining > 1) {
      EXPECT_EQ(below, c->visits);
    } else {
      EXPECT_TRUE(c->children.empty());
    }
  }
  // A non-root node's first pass is a rollout that creates no children.
  EXPECT_EQ(node.visits, sum + (is_root || node.visits == 0 ? 0 : 1));
}

TEST(Plan, TreeStatisticsCountPasses) {
  const GridSpec g = load_grid(GRL_FIXTURE_DIR "/maze10.grid");
  MixtureModel m = build_dispenser_class({g, 0.75});
  Gridworld truth(g);
  RngStream rng(9);
  m.update(kNoAction, truth.generate_percept(rng));
  Planner p(make_cfg(4, 300, 1.0, m.reward_range()), UtilityKind::reward);
  p.plan(m, rng);
  EXPECT_EQ(p.root().visits, 300U);
  check_counts(p.root(), true, 4);
}

TEST(TreeAdvance, KeepsOrResets) {
  TableEnv::Outcomes o{{{0, 1.0}, 0.5}, {{1, 0.0}, 0.5}};
  auto env = std::make_unique<TableEnv>(2, o, std::map<Action, TableEnv::Outcomes>{{0, o}, {1, o}});
  EnvironmentModel model(std::move(env));
  const PlannerConfig cfg = make_cfg(4, 200, 1.0, {0.0, 1.0});

  Planner p(cfg, UtilityKind::reward);
  RngStream rng(2);
  p.plan(model, rng);
  const auto& child = p.root().children[0];
  ASSERT_TRUE(child);
  const Percept e{0, 1.0};
  ASSERT_TRUE(child->children.count(e));
  const auto kept = child->children.at(e)->visits;
  ASSERT_GT(kept, 0U);
  p.advance(0, e, 0.0);
  EXPECT_EQ(p.root().visits, kept);

  Planner q(cfg, UtilityKind::reward);
  q.plan(model, rng);
  q.advance(0, e, 0.5);
  EXPECT_EQ(q.root().visits, 0U);

  Planner r(cfg, UtilityKind::reward);
  r.plan(model, rng);
  r.advance(0, Percept{7, 3.0}, 0.0);
  EXPECT_EQ(r.root().visits, 0U);
}

void check_normalized(const DecisionNode& node, const PlannerConfig& cfg) {
  const double width = cfg.horizon * (cfg.utility_range.max - cfg.utility_range.min);
  ASSERT_LE(std::abs(node.value / width), 1.0);
  for (const auto& c : node.children) {
    if (!c) continue;
    ASSERT_LE(std::abs(c->value / width), 1.0);
    for (const auto& [e, d] : c->children) check_normalized(*d, cfg);
  }
}

TEST(Plan, NormalizedValuesStayInUnitInterval) {
  const GridSpec g = load_grid(GRL_FIXTURE_DIR "/maze10.grid");
  Gridworld env(g);
  AgentConfig cfg;
  cfg.kind = AgentKind::aixi;
  cfg.samples = 100;
  auto agent = make_agent(cfg, env);
  auto* planning = dynamic_cast<PlanningAgent*>(agent.get());
  ASSERT_NE(planning, nullptr);
  int checked = 0;
  run_simulation(*agent, env, 200, RngStream(1), RngStream(2), [&](const CycleView&) {
    check_normalized(planning->planner().root(), planning->planner().config());
    ++checked;
  });
  EXPECT_EQ(checked, 200);
}

TEST(Planner, DebugLineListsRootActions) {
  EnvironmentModel model(constant_env(2, 1.0));
  Planner p(make_cfg(2, 10, 1.0, {0.0, 1.0}), UtilityKind::reward);
  RngStream rng(1);
  p.plan(model, rng);
  const std::string line = p.debug_line();
  EXPECT_NE(line.find("a=0 T="), std::string::npos);
  EXPECT_NE(line.find("a=1 T="), std::string::npos);
  EXPECT_NE(line.find("ucb="), std::string::npos);
}

TEST(PlannerConfig, Validation) {
  EXPECT_THROW(Planner(make_cfg(0, 10, 1.0, {0, 1}), UtilityKind::reward), ConfigError);
  EXPECT_THROW(Planner(make_cfg(2, 0, 1.0, {0, 1}), UtilityKind::reward), ConfigError);
  EXPECT_THROW(Planner(make_cfg(2, 10, 0.0, {0, 1}), UtilityKind::reward), ConfigError);
  EXPECT_THROW(Planner(make_cfg(2, 10, 1.0, {1, 1}), UtilityKind::reward), ConfigError);
}

}  // namespace
