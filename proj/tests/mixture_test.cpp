#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "grl/mixture.hpp"
#include "test_envs.hpp"
#include "oracles.hpp"

namespace {

using namespace grl;
using grl::testing::TableEnv;

const Percept kE{1, 0.0};
const Percept kF{2, 0.0};

// Two one-action hypotheses emitting kE with probabilities p1 and p2 (else kF).
MixtureModel two_hypotheses(double p1, double p2, std::vector<double> prior = {0.5, 0.5}) {
  std::vector<std::unique_ptr<Environment>> hyps;
  for (double p : {p1, p2}) {
    TableEnv::Outcomes o{{kE, p}, {kF, 1.0 - p}};
    hyps.push_back(std::make_unique<TableEnv>(1, o, std::map<Action, TableEnv::Outcomes>{{0, o}}));
  }
  return MixtureModel(std::move(hyps), FiniteDistribution(prior));
}

TEST(MixtureUpdate, Falsification) {
  auto m = two_hypotheses(1.0, 0.0);
  m.perform(0);
  EXPECT_DOUBLE_EQ(m.update(0, kE), 0.5);
  EXPECT_EQ(m.weights(), (std::vector<double>{1.0, 0.0}));
}

TEST(MixtureUpdate, Likelihoods) {
  auto m = two_hypotheses(0.75, 0.25);
  m.perform(0);
  m.update(0, kE);
  EXPECT_NEAR(m.weights()[0], 0.75, 1e-15);
  EXPECT_NEAR(m.weights()[1], 0.25, 1e-15);
}

TEST(MixtureUpdate, PointMassIsFixed) {
  auto m = two_hypotheses(0.3, 0.9, {1.0, 0.0});
  for (int i = 0; i < 10; ++i) {
    m.perform(0);
    m.update(0, i % 2 ? kE : kF);
    EXPECT_EQ(m.weights(), (std::vector<double>{1.0, 0.0}));
  }
}

TEST(MixtureUpdate, ImpossiblePerceptThrows) {
  auto m = two_hypotheses(1.0, 1.0);
  m.perform(0);
  EXPECT_THROW(m.update(0, kF), ModelInconsistency);
}

TEST(MixtureProb, Arithmetic) {
  auto m = two_hypotheses(1.0, 0.0);
  m.perform(0);
  EXPECT_DOUBLE_EQ(m.conditional(kE), 0.5);
}

TEST(MixtureProb, PointMassPerceptStream) {
  const GridSpec g = load_grid(GRL_FIXTURE_DIR "/maze10.grid");
  MixtureModel m = build_dispenser_class({g, 0.75});
  const std::size_t idx = dispenser_hypothesis_index(g, {0, 1});
  std::vector<std::unique_ptr<Environment>> hyps;
  for (std::size_t i = 0; i < m.size(); ++i) hyps.push_back(m.hypothesis(i).clone());
  std::vector<double> prior(m.size(), 0.0);
  prior[idx] = 1.0;
  MixtureModel point(std::move(hyps), FiniteDistribution(prior));
  auto alone = m.hypothesis(idx).clone();
  RngStream r1(77), r2(77);
  for (int t = 0; t < 200; ++t) {
    const Action a = t % 3 == 0 ? kRight : kStay;
    point.perform(a);
    alone->perform(a);
    const Percept e1 = point.generate_percept(r1);
    const Percept e2 = alone->generate_percept(r2);
    ASSERT_EQ(e1, e2) << t;
    point.update(a, e1);
  }
}

TEST(MixtureProb, SumsToOneOverPerceptSpace) {
  const GridSpec g = load_grid(GRL_FIXTURE_DIR "/maze10.grid");
  MixtureModel m = build_dispenser_class({g, 0.75});
  Gridworld truth(g);
  RngStream rng(5);
  const auto space = truth.percept_space();
  for (int t = 0; t < 50; ++t) {
    const Action a = static_cast<Action>(rng.uniform_index(kGridActions));
    m.perform(a);
    truth.perform(a);
    double total = 0.0;
    for (const Percept& e : space) total += m.conditional(e);
    ASSERT_NEAR(total, 1.0, 1e-12) << t;
    m.update(a, truth.generate_percept(rng));
  }
}

using oracle::dispenser_percept_prob;

TEST(MixtureProb, BruteForceOracleOnSmallGrid) {
  GridSpec base = GridSpec::filled(3);
  base.at(1, 1) = {TileKind::wall, 0.0};
  const double theta = 0.6;
  std::vector<Coord> open;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (base.at(r, c).kind != TileKind::wall) open.push_back({r, c});
  std::vector<double> w;
  for (std::size_t i = 0; i < open.size(); ++i) w.push_back(static_cast<double>(i + 1));
  const auto prior = FiniteDistribution::normalized(w);
  std::vector<Percept> percepts;
  for (std::uint64_t o = 0; o < 16; ++o)
    for (double r : {-1.0, -5.0, 100.0}) percepts.push_back({o, r});
  for (const Coord& pos : open) {
    std::vector<std::unique_ptr<Environment>> hyps;
    for (const Coord& d : open) {
      GridSpec g = base;
      g.start = pos;
      g.at(d.row, d.col) = {TileKind::dispenser, theta};
      hyps.push_back(std::make_unique<Gridworld>(g));
    }
    MixtureModel m(std::move(hyps), prior);
    for (const Percept& e : percepts) {
      double expect = 0.0;
      for (std::size_t i = 0; i < open.size(); ++i) expect += prior[i] * dispenser_percept_prob(base, pos, open[i], theta, e);
      ASSERT_NEAR(m.conditional(e), expect, 1e-15) << pos.row << "," << pos.col;
    }
  }
}

TEST(MixtureUpdate, ThousandRandomUpdatesStayNormalized) {
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec g = load_grid(GRL_FIXTURE_DIR "/maze10.grid");
  MixtureModel m = build_dispenser_class({g, 0.75});
  Gridworld truth(g);
  const std::size_t truth_idx = dispenser_hypothesis_index(g, {2, 6});
  RngStream rng(12);
  std::vector<char> dead(m.size(), 0);
  m.update(kNoAction, truth.generate_percept(rng));
  for (int t = 0; t < 1000; ++t) {
    const Action a = static_cast<Action>(rng.uniform_index(kGridActions));
    m.perform(a);
    truth.perform(a);
    m.update(a, truth.generate_percept(rng));
    double total = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double w = m.weights()[i];
      ASSERT_GE(w, 0.0);
      ASSERT_LE(w, 1.0);
      if (dead[i]) ASSERT_EQ(w, 0.0) << "hypothesis " << i << " revived";
      if (w == 0.0) dead[i] = 1;
      total += w;
    }
    ASSERT_NEAR(total, 1.0, 1e-9);
    ASSERT_GT(m.weights()[truth_idx], 0.0);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 5.0);
}

TEST(MixtureUpdate, CollapseOnFirstCake) {
  GridSpec g = load_grid(GRL_FIXTURE_DIR "/maze10.grid");
  g.at(2, 6).theta = 1.0;
  g.start = {2, 7};
  MixtureModel m = build_dispenser_class({g, 1.0});
  Gridworld truth(g);
  RngStream rng(1);
  m.update(kNoAction, truth.generate_percept(rng));
  EXPECT_GT(m.entropy(), 0.0);
  m.perform(kLeft);
  truth.perform(kLeft);
  const Percept e = truth.generate_percept(rng);
  ASSERT_EQ(e.reward, 100.0);
  m.update(kLeft, e);
  const std::size_t idx = dispenser_hypothesis_index(g, {2, 6});
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(m.weights()[i], i == idx ? 1.0 : 0.0);
  EXPECT_EQ(m.entropy(), 0.0);
}

TEST(MixtureUpdate, UnderflowClampZeroesTinyWeights) {
  std::vector<std::unique_ptr<Environment>> hyps;
  for (double p : {0.5, 1e-6}) {
    TableEnv::Outcomes o{{kE, p}, {kF, 1.0 - p}};
    hyps.push_back(std::make_unique<TableEnv>(1, o, std::map<Action, TableEnv::Outcomes>{{0, o}}));
  }
  MixtureModel m(std::move(hyps), FiniteDistribution({0.5, 0.5}), 1e-20);
  for (int i = 0; i < 4; ++i) {
    m.perform(0);
    m.update(0, kE);
  }
  EXPECT_EQ(m.weights()[1], 0.0);
  EXPECT_EQ(m.weights()[0], 1.0);
}

TEST(InfoGain, Examples) {
  const std::vector<double> u{0.5, 0.5}, p{1.0, 0.0}, s{0.75, 0.25};
  EXPECT_EQ(info_gain(u, u), 0.0);
  EXPECT_NEAR(info_gain(u, p), 1.0, 1e-15);
  const double h = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25));
  EXPECT_NEAR(info_gain(u, s), 1.0 - h, 1e-15);
  EXPECT_NEAR(info_gain(u, s), 0.188721875540867, 1e-12);
}

TEST(DispenserClass, Sizes) {
  MixtureModel m = build_dispenser_class({GridSpec::filled(2), 0.75});
  EXPECT_EQ(m.size(), 4U);
  for (double w : m.weights()) EXPECT_DOUBLE_EQ(w, 0.25);
  GridSpec g = GridSpec::filled(10);
  const std::vector<Coord> walls{{0, 5}, {3, 3}, {9, 9}, {4, 7}};
  for (const Coord& c : walls) g.at(c.row, c.col) = {TileKind::wall, 0.0};
  EXPECT_EQ(build_dispenser_class({g, 0.75}).size(), 96U);
  const GridSpec fixture = load_grid(GRL_FIXTURE_DIR "/maze10.grid");
  std::size_t open = 0;
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 10; ++c) open += fixture.at(r, c).kind != TileKind::wall ? 1U : 0U;
  EXPECT_EQ(build_dispenser_class({fixture, 0.75}).size(), open);
}

TEST(DispenserClass, RowMajorOrder) {
  const GridSpec g = load_grid(GRL_FIXTURE_DIR "/maze10.grid");
  MixtureModel m = build_dispenser_class({g, 0.75});
  std::size_t i = 0;
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 10; ++c) {
      if (g.at(r, c).kind == TileKind::wall) continue;
      const auto& h = dynamic_cast<const Gridworld&>(m.hypothesis(i));
      EXPECT_EQ(h.spec().at(r, c).kind, TileKind::dispenser);
      EXPECT_EQ(dispenser_hypothesis_index(g, {r, c}), i);
      ++i;
    }
}

TEST(DogmaticPrior, Arithmetic) {
  EXPECT_THROW(build_dogmatic_prior(10, {8, 9}, 0.0), ConfigError);
  const auto w = build_dogmatic_prior(10, {8, 9}, 0.999);
  EXPECT_DOUBLE_EQ(w[8], 0.4995);
  EXPECT_DOUBLE_EQ(w[9], 0.4995);
  double total = 0.0;
  for (double x : w) total += x;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(DogmaticClass, TrapHypotheses) {
  const GridSpec g = load_grid(GRL_FIXTURE_DIR "/maze10.grid");
  MixtureModel m = build_dogmatic_class({g, 0.75}, 0.999);
  const auto traps = dogmatic_trap_tiles(g);
  ASSERT_EQ(traps.size(), 2U);
  EXPECT_EQ(m.size(), 65U + 2U);
  EXPECT_DOUBLE_EQ(m.weights()[65], 0.4995);
  EXPECT_DOUBLE_EQ(m.weights()[66], 0.4995);
}

TEST(MixtureSnapshot, RoundTrips) {
  const GridSpec g = load_grid(GRL_FIXTURE_DIR "/maze10.grid");
  MixtureModel m = build_dispenser_class({g, 0.75});
  Gridworld truth(g);
  RngStream rng(3);
  const auto space = truth.percept_space();
  auto probs = [&] {
    std::vector<double> p;
    for (const auto& e : space) p.push_back(m.conditional(e));
    return p;
  };
  const auto before = probs();
  const auto w_before = m.weights();
  const auto snap = m.snapshot();
  auto run = [&](int steps) {
    for (int i = 0; i < steps; ++i) {
      const Action a = static_cast<Action>(rng.uniform_index(kGridActions));
      m.perform(a);
      m.update(a, m.generate_percept(rng));
    }
  };
  run(10);
  m.restore(snap);
  EXPECT_EQ(probs(), before);
  run(5);
  m.restore(snap);
  EXPECT_EQ(probs(), before);
  EXPECT_EQ(m.weights(), w_before);

  run(3);
  const auto mid_w = m.weights();
  const auto mid_hash = m.state_hash();
  const auto inner = m.snapshot();
  run(4);
  m.restore(inner);
  EXPECT_EQ(m.weights(), mid_w);
  EXPECT_EQ(m.state_hash(), mid_hash);
  m.restore(snap);
  EXPECT_EQ(m.weights(), w_before);

  MixtureModel other = build_dispenser_class({g, 0.75});
  EXPECT_THROW(other.restore(snap), SnapshotMismatch);
}

}  // namespace
