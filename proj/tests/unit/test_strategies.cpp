#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "stratinfer/delaunay.hpp"
#include "stratinfer/error.hpp"
#include "stratinfer/simulate.hpp"
#include "stratinfer/strategies.hpp"

using namespace stratinfer;

namespace {

DirectionDeg d(double v) { return DirectionDeg(v); }

// Owns everything a StrategyContext points into.
struct Scene {
  std::vector<DirectionSeries> dirs;
  std::vector<Vec2> pos;
  ProbFollowNetwork net;
  std::vector<AgentIndex> informed;
  std::optional<DirectionDeg> target;

  StrategyContext ctx(std::size_t t) const {
    StrategyContext c;
    c.directions = &dirs;
    c.t = t;
    c.positions = pos;
    c.network = &net;
    c.informed = informed;
    c.target = target;
    return c;
  }
};

Scene random_scene(std::size_t n, std::size_t history, std::mt19937_64& rng) {
  Scene s;
  s.dirs = oracle::random_series(n, history + 1, rng);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (std::size_t a = 0; a < n; ++a) s.pos.push_back({u(rng), u(rng)});
  s.net = ProbFollowNetwork(n);
  std::uniform_real_distribution<double> p(0.05, 1.0);
  for (AgentIndex a = 1; a < n; ++a) {
    s.net.add_edge(a, 0, p(rng));
    if (a > 1 && a % 2 == 0) s.net.add_edge(a, a - 1, p(rng));
  }
  return s;
}

}  // namespace

TEST(PredictHmSim, Examples) {
  Scene s;
  s.dirs = {{d(90)}, {d(0)}, {d(90)}};
  s.net = ProbFollowNetwork(3);
  s.informed = {0};
  s.target = d(33);
  const auto c = s.ctx(1);
  EXPECT_EQ(predict_hm_sim(c, 0, std::vector<AgentIndex>{0}).value(), 33.0);
  EXPECT_EQ(predict_hm_sim(c, 1, std::vector<AgentIndex>{1}).value(), 0.0);
  EXPECT_NEAR(predict_hm_sim(c, 1, std::vector<AgentIndex>{1, 0}).value(), 45.0, 1e-12);
}

TEST(RealizeNetwork, DeterministicExtremesAndFrequency) {
  std::mt19937_64 rng(1);
  const auto full = ProbFollowNetwork::star(5, 0, 1.0);
  EXPECT_EQ(realize_network(full, rng).size(), 4u);
  EXPECT_TRUE(realize_network(ProbFollowNetwork(5), rng).empty());
  const auto half = ProbFollowNetwork::star(3, 0, 0.5);
  std::vector<int> hits(3, 0);
  const int reps = 10000;
  for (int r = 0; r < reps; ++r) {
    for (const auto& e : realize_network(half, rng)) ++hits[e.follower];
  }
  EXPECT_NEAR(hits[1] / double(reps), 0.5, 0.02);
  EXPECT_NEAR(hits[2] / double(reps), 0.5, 0.02);
}

TEST(PredictHmFit, Examples) {
  Scene s;
  s.dirs = {{d(0)}, {d(90)}, {d(90)}};
  s.net = ProbFollowNetwork(3);
  EXPECT_EQ(predict_hm_fit(s.ctx(1), 0).value(), 0.0);
  s.net.add_edge(0, 1, 1.0);
  EXPECT_NEAR(predict_hm_fit(s.ctx(1), 0).value(), 45.0, 1e-12);
  s.net = ProbFollowNetwork(3);
  s.net.add_edge(0, 1, 0.5);
  s.net.add_edge(0, 2, 0.5);
  EXPECT_NEAR(predict_hm_fit(s.ctx(1), 0).value(), oracle::vector_mean_deg({0, 90, 90}, {1, 0.5, 0.5}), 1e-12);
}

TEST(PredictLra, Examples) {
  Scene s;
  s.dirs = {{d(0)}, {d(90)}};
  s.pos = {{0, 0}, {1, 0}};
  s.net = ProbFollowNetwork(2);
  EXPECT_NEAR(predict_lra(s.ctx(1), 1).value(), 45.0, 1e-12);
  s.informed = {0};
  s.target = d(-120);
  EXPECT_EQ(predict_lra(s.ctx(1), 0).value(), -120.0);
}

TEST(PredictLra, SimulationStepMatchesCircumcircleOracle) {
  SimSpec spec;
  spec.model = Regime::LRA;
  spec.n_steps = 30;
  spec.seed = 77;
  const auto ts = simulate(spec);
  for (std::size_t t : {1u, 10u, 29u}) {
    std::vector<Vec2> pos;
    for (const auto& p : ts.positions) pos.push_back(p[t]);
    const auto brute = oracle::empty_circle_neighbors(pos);
    StrategyContext c;
    c.directions = &ts.directions;
    c.t = t;
    c.positions = pos;
    for (AgentIndex i = 1; i < ts.n_agents(); ++i) {
      std::vector<double> dirs, ones;
      for (auto j : brute[i]) {
        dirs.push_back(ts.directions[j][t - 1].value());
        ones.push_back(1.0);
      }
      const double expected = oracle::vector_mean_deg(dirs, ones);
      EXPECT_LT(dist_dir(predict_lra(c, i), d(expected)), 1e-9);
      // The simulated heading is exactly this prediction.
      EXPECT_LT(dist_dir(ts.directions[i][t], d(expected)), 1e-9);
    }
  }
}

TEST(PredictAr, Examples) {
  Scene s;
  s.dirs = {{d(30), d(30), d(30), d(30), d(30), d(30)}};
  EXPECT_NEAR(predict_ar(s.ctx(5), 0, 5).value(), 30.0, 1e-12);
  s.dirs = {{d(0), d(90), d(0)}};
  EXPECT_NEAR(predict_ar(s.ctx(2), 0, 5).value(), 45.0, 1e-12);
  s.dirs = {{d(10), d(20), d(30), d(40), d(50), d(0)}};
  EXPECT_NEAR(predict_ar(s.ctx(5), 0, 5).value(), 30.0, 1e-12);
}

TEST(PredictInformed, Examples) {
  Scene s;
  s.dirs = {{d(0), d(120)}, {d(0), d(7)}};
  s.informed = {0};
  EXPECT_NEAR(predict_informed(s.ctx(1), 1).value(), 120.0, 1e-12);
  s.dirs = {{d(0), d(10)}, {d(0), d(50)}, {d(0), d(-80)}};
  s.informed = {0, 1};
  EXPECT_NEAR(predict_informed(s.ctx(1), 2).value(), 30.0, 1e-12);
  s.informed.clear();
  EXPECT_THROW(predict_informed(s.ctx(1), 2), Error);

  std::mt19937_64 rng(4);
  Scene r;
  r.dirs = oracle::random_series(12, 2, rng);
  std::vector<double> vals, ones;
  for (AgentIndex a = 0; a < 10; ++a) {
    r.informed.push_back(a);
    vals.push_back(r.dirs[a][1].value());
    ones.push_back(1.0);
  }
  EXPECT_NEAR(dist_dir(predict_informed(r.ctx(1), 11), d(oracle::vector_mean_deg(vals, ones))), 0.0, 1e-9);
}

TEST(PredictMix, UniformWeightsOverSymmetricPredictions) {
  const PurePredictions p{d(0), d(90), d(180)};
  EXPECT_NEAR(mix_predictions(p, SupportVector{}, d(0)).value(), 90.0, 1e-9);
}

TEST(PredictMix, PureWeightsReduceBitForBit) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 1000; ++k) {
    const auto s = random_scene(3 + k % 8, 6, rng);
    const auto c = s.ctx(1 + k % 6);
    const AgentIndex i = k % s.dirs.size();
    EXPECT_EQ(predict_mix(c, i, {1, 0, 0}), predict_hm_fit(c, i));
    EXPECT_EQ(predict_mix(c, i, {0, 1, 0}), predict_lra(c, i));
    EXPECT_EQ(predict_mix(c, i, {0, 0, 1}), predict_ar(c, i));
  }
}

TEST(PredictMix, OutputLiesInConeOfInputs) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    // Inputs within a half-plane so the cone is a proper wedge.
    const double base = oracle::random_direction(rng).value();
    std::vector<double> a{base, base + 170.0 * u(rng), base + 170.0 * u(rng)};
    const PurePredictions p{d(a[0]), d(a[1]), d(a[2])};
    double w1 = u(rng), w2 = u(rng) * (1 - w1);
    const auto out = mix_predictions(p, {w1, w2, 1 - w1 - w2}, d(0));
    const double lo = *std::min_element(a.begin(), a.end());
    const double hi = *std::max_element(a.begin(), a.end());
    const double rel = DirectionDeg(out.value() - lo).value();
    const double rel_wrapped = rel < -1e-9 ? rel + 360.0 : rel;
    EXPECT_GE(rel_wrapped, -1e-9);
    EXPECT_LE(rel_wrapped, hi - lo + 1e-9);
  }
}

TEST(Strategies, RotationEquivariance) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    auto s = random_scene(8, 6, rng);
    const double theta = oracle::random_direction(rng).value();
    Scene r = s;
    const double c = std::cos(theta * M_PI / 180.0), sn = std::sin(theta * M_PI / 180.0);
    for (auto& series : r.dirs) {
      for (auto& v : series) v = rotate(v, theta);
    }
    for (auto& p : r.pos) p = {c * p.x - sn * p.y, sn * p.x + c * p.y};
    const auto a = s.ctx(5), b = r.ctx(5);
    for (AgentIndex i = 0; i < 8; ++i) {
      EXPECT_LT(dist_dir(rotate(predict_hm_fit(a, i), theta), predict_hm_fit(b, i)), 1e-6);
      EXPECT_LT(dist_dir(rotate(predict_lra(a, i), theta), predict_lra(b, i)), 1e-6);
      EXPECT_LT(dist_dir(rotate(predict_ar(a, i), theta), predict_ar(b, i)), 1e-6);
      EXPECT_LT(dist_dir(rotate(predict_mix(a, i, {0.2, 0.5, 0.3}), theta), predict_mix(b, i, {0.2, 0.5, 0.3})),
                1e-6);
    }
  }
}
