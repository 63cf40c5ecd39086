#pragma once

// Deliberately naive reference implementations used to check the library.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "stratinfer/coordination.hpp"
#include "stratinfer/dirmath.hpp"
#include "stratinfer/support_qp.hpp"

namespace oracle {

using stratinfer::DirectionDeg;
using stratinfer::DirectionSeries;
using stratinfer::Vec2;

/// Angular distance by explicit case analysis on raw degrees.
double angle_gap(double a, double b);

/// atan2 of summed cos/sin, in degrees.
double vector_mean_deg(const std::vector<double>& dirs, const std::vector<double>& weights);

struct Shift {
  double similarity;
  std::size_t delay;
};

/// Enumerates every shift in [0, max_shift]; delay is the smallest shift within `tol` of the best.
Shift best_shift(const DirectionSeries& leader, const DirectionSeries& follower, std::size_t max_shift,
                 double tol = 1e-9);

/// follower follows leader per the definition, with delay >= 0.
bool follows(const DirectionSeries& leader, const DirectionSeries& follower, double sigma, std::size_t max_shift);

/// Every unordered pair related in at least one direction over [start, end].
bool coordinated(const std::vector<DirectionSeries>& series, std::size_t start, std::size_t end, double sigma,
                 std::size_t max_shift);

/// Neighbor sets from all triangles with an empty circumcircle (points on the circle allowed).
std::vector<std::vector<std::size_t>> empty_circle_neighbors(const std::vector<Vec2>& pts);

/// True when no point lies strictly inside the circumcircle of (a, b, c).
bool circumcircle_empty(const std::vector<Vec2>& pts, std::size_t a, std::size_t b, std::size_t c);

/// Objective of w evaluated row by row from raw cos/sin.
double mix_sse(const stratinfer::PredictionMatrix& m, double w1, double w2, double w3);

/// Smallest objective over the constrained simplex sampled at the given resolution.
double grid_minimum(const stratinfer::PredictionMatrix& m, const stratinfer::ThresholdVector& kappa,
                    double step = 0.005);

std::vector<DirectionSeries> random_series(std::size_t agents, std::size_t steps, std::mt19937_64& rng);
DirectionDeg random_direction(std::mt19937_64& rng);

}  // namespace oracle
