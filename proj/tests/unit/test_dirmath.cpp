#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "stratinfer/dirmath.hpp"
#include "stratinfer/error.hpp"

using namespace stratinfer;

namespace {

DirectionDeg d(double v) { return DirectionDeg(v); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::Parse;
}

}  // namespace

TEST(DirectionDeg, NormalizesIntoHalfOpenRange) {
  EXPECT_DOUBLE_EQ(d(180).value(), 180.0);
  EXPECT_DOUBLE_EQ(d(-180).value(), 180.0);
  EXPECT_DOUBLE_EQ(d(540).value(), 180.0);
  EXPECT_DOUBLE_EQ(d(-190).value(), 170.0);
  EXPECT_DOUBLE_EQ(d(360).value(), 0.0);
  EXPECT_EQ(code_of([] { DirectionDeg x(std::nan("")); (void)x; }), ErrorCode::InvalidParam);
}

TEST(DistDir, Examples) {
  EXPECT_DOUBLE_EQ(dist_dir(d(-179), d(180)), 1.0);
  EXPECT_DOUBLE_EQ(dist_dir(d(10), d(10)), 0.0);
  EXPECT_DOUBLE_EQ(dist_dir(d(90), d(-90)), 180.0);
}

TEST(DistDir, MetricAxiomsOnRandomTriples) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 10000; ++k) {
    const auto a = oracle::random_direction(rng), b = oracle::random_direction(rng),
               c = oracle::random_direction(rng);
    const double ab = dist_dir(a, b);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 180.0);
    EXPECT_EQ(ab, dist_dir(b, a));
    EXPECT_EQ(dist_dir(a, a), 0.0);
    EXPECT_LE(ab, dist_dir(a, c) + dist_dir(c, b) + 1e-9);
    EXPECT_NEAR(ab, oracle::angle_gap(a.value(), b.value()), 1e-12);
  }
}

TEST(CircularMean, Examples) {
  std::vector<DirectionDeg> a{d(0), d(90)};
  EXPECT_NEAR(circular_mean(a, std::vector<double>{1, 1}).value(), 45.0, 1e-12);
  std::vector<DirectionDeg> b{d(170), d(-170)};
  EXPECT_NEAR(dist_dir(circular_mean(b, std::vector<double>{1, 1}), d(180)), 0.0, 1e-12);
  std::vector<DirectionDeg> c{d(30), d(60), d(90)};
  const double expected = oracle::vector_mean_deg({30, 60, 90}, {1, 2, 1});
  EXPECT_NEAR(circular_mean(c, std::vector<double>{1, 2, 1}).value(), expected, 1e-12);
  EXPECT_NEAR(expected, 60.0, 1e-12);
}

TEST(CircularMean, SingletonIsExact) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 1000; ++k) {
    const std::vector<DirectionDeg> one{oracle::random_direction(rng)};
    EXPECT_EQ(circular_mean(one).value(), one[0].value());
  }
}

TEST(CircularMean, RotationInvariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(0.1, 2.0);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 2 + k % 6;
    std::vector<DirectionDeg> dirs, rotated;
    std::vector<double> weights;
    const double theta = oracle::random_direction(rng).value();
    for (std::size_t j = 0; j < n; ++j) {
      dirs.push_back(oracle::random_direction(rng));
      rotated.push_back(rotate(dirs.back(), theta));
      weights.push_back(w(rng));
    }
    const auto m = circular_mean(dirs, weights);
    const auto r = circular_mean(rotated, weights);
    EXPECT_LT(dist_dir(rotate(m, theta), r), 1e-9);
  }
}

TEST(CircularMean, Errors) {
  std::vector<DirectionDeg> opposed{d(0), d(180)};
  EXPECT_EQ(code_of([&] { circular_mean(opposed); }), ErrorCode::ZeroResultant);
  EXPECT_EQ(code_of([&] { circular_mean(opposed, std::vector<double>{-1, 1}); }), ErrorCode::InvalidParam);
  EXPECT_EQ(code_of([&] { circular_mean(opposed, std::vector<double>{0, 0}); }), ErrorCode::InvalidParam);
  EXPECT_EQ(code_of([&] { circular_mean(opposed, std::vector<double>{1}); }), ErrorCode::InvalidParam);
}

TEST(DirectionsFromPositions, Examples) {
  EXPECT_DOUBLE_EQ(directions_from_positions(PositionSeries{{0, 0}, {1, 0}})[0].value(), 0.0);
  EXPECT_DOUBLE_EQ(directions_from_positions(PositionSeries{{0, 0}, {0, 1}})[0].value(), 90.0);
  EXPECT_DOUBLE_EQ(directions_from_positions(PositionSeries{{0, 0}, {-1, -1}})[0].value(), -135.0);
  EXPECT_EQ(code_of([] { directions_from_positions(PositionSeries{{0, 0}}); }), ErrorCode::TooShort);
}

TEST(DirectionsFromPositions, StationaryStepCarriesPreviousHeading) {
  const auto s = directions_from_positions(PositionSeries{{0, 0}, {0, 1}, {0, 1}, {1, 1}});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s[1].value(), 90.0);
  EXPECT_DOUBLE_EQ(s[2].value(), 0.0);
}

TEST(DirectionsFromPositions, UnitReintegrationReproducesHeadings) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    DirectionSeries heading;
    for (int t = 0; t < 200; ++t) heading.push_back(oracle::random_direction(rng));
    PositionSeries p{{3.5, -2.0}};
    for (const auto& h : heading) {
      const auto u = to_unit(h);
      p.push_back({p.back().x + u.x, p.back().y + u.y});
    }
    const auto back = directions_from_positions(p);
    ASSERT_EQ(back.size(), heading.size());
    for (std::size_t t = 0; t < heading.size(); ++t) EXPECT_LT(dist_dir(back[t], heading[t]), 1e-9);
  }
}
