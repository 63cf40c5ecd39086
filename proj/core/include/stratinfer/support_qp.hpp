#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "stratinfer/dirmath.hpp"
#include "stratinfer/strategies.hpp"

namespace stratinfer {

/// Lower bounds on the support weights (HM, LRA, AR).
struct ThresholdVector {
  double hm = 0.0;
  double lra = 0.0;
  double ar = 0.0;

  double operator[](std::size_t k) const { return k == 0 ? hm : (k == 1 ? lra : ar); }
  double sum() const noexcept { return hm + lra + ar; }
  /// Every bound in [0, 1] and the bounds sum to at most one.
  bool feasible() const noexcept;

  friend bool operator==(const ThresholdVector&, const ThresholdVector&) = default;
};

/// The default grid: one unbiased model and one biased toward each pure strategy.
std::vector<ThresholdVector> default_kappa_grid();

/// Teacher-forced pure predictions and the realized heading, one row per fitted step.
struct PredictionMatrix {
  std::vector<PurePredictions> predictions;
  std::vector<DirectionDeg> actual;
  /// Heading at t - 1, the fallback when a mixed prediction cancels out.
  std::vector<DirectionDeg> previous;
  /// Time index of each row within its event.
  std::vector<std::size_t> steps;

  std::size_t rows() const noexcept { return actual.size(); }
  void push_back(const PurePredictions& p, DirectionDeg actual_dir, DirectionDeg previous_dir, std::size_t t);
  void append(const PredictionMatrix& other);
};

/// f(w) = w'Gw - 2c'w + b for the residual rows A w - y, with G = A'A, c = A'y, b = y'y.
struct QuadraticForm {
  std::array<std::array<double, 3>, 3> gram{};
  std::array<double, 3> linear{};
  double constant = 0.0;

  double operator()(const SupportVector& w) const noexcept;
};

/// Accumulates the embedded least-squares objective over all rows of `m`.
QuadraticForm quadratic_form(const PredictionMatrix& m);

/// Sum of squared distances between the mixed unit-vector prediction and the actual heading.
double support_objective(const PredictionMatrix& m, const SupportVector& w);

/// Global minimizer of the quadratic over {w : sum w = 1, w >= kappa}.
///
/// Enumerates the seven faces of the constrained simplex, solving each as an
/// equality-constrained least-squares problem, and keeps the feasible candidate
/// with the lowest objective. Candidates within 1e-11 * max(1, y'y) of the best are
/// resolved toward the one closest to (1/3, 1/3, 1/3).
/// Throws Error(InfeasibleKappa) if the bounds sum above one or leave [0, 1].
SupportVector solve_support_qp(const QuadraticForm& q, const ThresholdVector& kappa);
SupportVector solve_support_qp(const PredictionMatrix& m, const ThresholdVector& kappa);

}  // namespace stratinfer
