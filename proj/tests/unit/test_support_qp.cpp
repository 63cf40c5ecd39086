#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "stratinfer/error.hpp"
#include "stratinfer/support_qp.hpp"

using namespace stratinfer;

namespace {

DirectionDeg d(double v) { return DirectionDeg(v); }

// Targets are a noisy blend of the columns so optima land on every kind of face.
PredictionMatrix random_matrix(std::mt19937_64& rng, std::size_t rows) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 20.0);
  const double a = u(rng), b = u(rng) * (1 - a);
  const SupportVector mix{a, b, 1 - a - b};
  PredictionMatrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const double base = oracle::random_direction(rng).value();
    const PurePredictions p{d(base + noise(rng) * 3), d(base + noise(rng) * 3), d(base + noise(rng) * 3)};
    const double y = oracle::vector_mean_deg({p.hm.value(), p.lra.value(), p.ar.value()}, {mix.hm, mix.lra, mix.ar});
    m.push_back(p, d(y + noise(rng)), d(base), r + 1);
  }
  return m;
}

ThresholdVector random_kappa(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> u(0.0, 0.3);
  switch (k % 4) {
    case 0: return {};
    case 1: return {u(rng), 0, 0};
    case 2: return {0, u(rng), u(rng)};
    default: return {u(rng), u(rng), u(rng)};
  }
}

}  // namespace

TEST(SupportQp, ZeroResidualVertex) {
  PredictionMatrix m;
  std::mt19937_64 rng(1);
  for (int r = 0; r < 30; ++r) {
    const auto hm = oracle::random_direction(rng);
    m.push_back({hm, oracle::random_direction(rng), oracle::random_direction(rng)}, hm, hm, r + 1);
  }
  const auto w = solve_support_qp(m, {});
  EXPECT_NEAR(w.hm, 1.0, 1e-9);
  EXPECT_NEAR(w.lra, 0.0, 1e-9);
  EXPECT_NEAR(w.ar, 0.0, 1e-9);
}

TEST(SupportQp, IdenticalColumnsTieToUniform) {
  PredictionMatrix m;
  std::mt19937_64 rng(2);
  for (int r = 0; r < 30; ++r) {
    const auto p = oracle::random_direction(rng);
    m.push_back({p, p, p}, oracle::random_direction(rng), p, r + 1);
  }
  const auto w = solve_support_qp(m, {});
  EXPECT_NEAR(w.hm, 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(w.lra, 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(w.ar, 1.0 / 3.0, 1e-9);
}

TEST(SupportQp, InfeasibleKappaThrows) {
  PredictionMatrix m;
  m.push_back({d(0), d(0), d(0)}, d(0), d(0), 1);
  try {
    solve_support_qp(m, {0.6, 0.6, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleKappa);
  }
  EXPECT_THROW(solve_support_qp(m, {-0.1, 0, 0}), Error);
}

TEST(SupportQp, BeatsGridOracle) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const auto m = random_matrix(rng, 20 + k);
    const auto kappa = random_kappa(rng, k);
    const auto w = solve_support_qp(m, kappa);
    EXPECT_TRUE(w.on_simplex());
    EXPECT_GE(w.hm, kappa.hm - 1e-12);
    EXPECT_GE(w.lra, kappa.lra - 1e-12);
    EXPECT_GE(w.ar, kappa.ar - 1e-12);
    const double value = oracle::mix_sse(m, w.hm, w.lra, w.ar);
    EXPECT_NEAR(value, support_objective(m, w), 1e-9);
    EXPECT_LE(value, oracle::grid_minimum(m, kappa) + 1e-6) << "instance " << k;
  }
}

TEST(SupportQp, RaisingKappaNeverLowersTheOptimum) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 50; ++k) {
    const auto m = random_matrix(rng, 40);
    double last = -1.0;
    for (double k1 : {0.0, 0.1, 0.25, 0.5, 0.75, 1.0}) {
      const double v = support_objective(m, solve_support_qp(m, {k1, 0, 0}));
      EXPECT_GE(v, last - 1e-9);
      last = v;
    }
  }
}

TEST(SupportQp, ArgminInvariantUnderScaling) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const auto q = quadratic_form(random_matrix(rng, 30));
    const auto kappa = random_kappa(rng, k);
    const auto w = solve_support_qp(q, kappa);
    for (double c : {0.01, 3.0, 1000.0}) {
      QuadraticForm s = q;
      for (auto& row : s.gram) {
        for (auto& v : row) v *= c;
      }
      for (auto& v : s.linear) v *= c;
      s.constant *= c;
      const auto ws = solve_support_qp(s, kappa);
      EXPECT_NEAR(ws.hm, w.hm, 1e-7);
      EXPECT_NEAR(ws.lra, w.lra, 1e-7);
      EXPECT_NEAR(ws.ar, w.ar, 1e-7);
    }
  }
}

TEST(SupportQp, QuadraticFormMatchesDirectSum) {
  std::mt19937_64 rng(6);
  const auto m = random_matrix(rng, 50);
  const auto q = quadratic_form(m);
  for (const SupportVector w : {SupportVector{}, SupportVector{1, 0, 0}, SupportVector{0.2, 0.3, 0.5}}) {
    EXPECT_NEAR(q(w), support_objective(m, w), 1e-9);
  }
}

TEST(ThresholdVector, DefaultGridIsFeasible) {
  const auto grid = default_kappa_grid();
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_EQ(grid[0], (ThresholdVector{0, 0, 0}));
  for (const auto& k : grid) EXPECT_TRUE(k.feasible());
  EXPECT_FALSE((ThresholdVector{0.6, 0.6, 0}).feasible());
}
