#include "stratinfer/support_qp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stratinfer/error.hpp"

namespace stratinfer {

namespace {

constexpr double kUniform = 1.0 / 3.0;

double distance_to_uniform(const SupportVector& w) {
  double s = 0.0;
  for (std::size_t k = 0; k < 3; ++k) s += (w[k] - kUniform) * (w[k] - kUniform);
  return s;
}

// Minimizes the quadratic over the face where every index outside `free_set` is
// pinned to its bound and the free weights share the remaining mass. Returns
// false when the unconstrained face optimum leaves the feasible region.
bool solve_face(const Eigen::Matrix3d& g, const Eigen::Vector3d& c, const ThresholdVector& kappa,
                const std::vector<int>& free_set, SupportVector& out) {
  Eigen::Vector3d w;
  for (int k = 0; k < 3; ++k) w[k] = kappa[static_cast<std::size_t>(k)];
  double pinned = 0.0;
  for (int k = 0; k < 3; ++k) {
    if (std::find(free_set.begin(), free_set.end(), k) == free_set.end()) pinned += w[k];
  }
  const double mass = 1.0 - pinned;
  const auto m = static_cast<int>(free_set.size());
  for (int k : free_set) w[k] = mass / m;

  if (m > 1) {
    // Null space of the sum constraint on the free coordinates, embedded in R^3.
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(3, m - 1);
    for (int j = 0; j + 1 < m; ++j) {
      basis(free_set[static_cast<std::size_t>(j)], j) = 1.0;
      basis(free_set.back(), j) = -1.0;
    }
    const Eigen::MatrixXd h = basis.transpose() * g * basis;
    const Eigen::VectorXd rhs = basis.transpose() * (c - g * w);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    const double top = std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), g.cwiseAbs().maxCoeff());
    const double cutoff = 1e-10 * top;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(m - 1);
    for (int j = 0; j < m - 1; ++j) {
      const double lambda = eig.eigenvalues()[j];
      if (lambda > cutoff) {
        const Eigen::VectorXd v = eig.eigenvectors().col(j);
        z += v * (v.dot(rhs) / lambda);
      }
    }
    w += basis * z;
  }

  for (int k = 0; k < 3; ++k) {
    const double lo = kappa[static_cast<std::size_t>(k)];
    if (w[k] < lo - 1e-12) return false;
    w[k] = std::max(w[k], lo);
  }
  out = SupportVector{w[0], w[1], w[2]};
  return true;
}

}  // namespace

bool ThresholdVector::feasible() const noexcept {
  for (std::size_t k = 0; k < 3; ++k) {
    const double v = (*this)[k];
    if (!(v >= 0.0 && v <= 1.0)) return false;
  }
  return sum() <= 1.0 + 1e-12;
}

std::vector<ThresholdVector> default_kappa_grid() {
  return {{0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}, {0.0, 0.5, 0.0}, {0.0, 0.0, 0.5}};
}

void PredictionMatrix::push_back(const PurePredictions& p, DirectionDeg actual_dir, DirectionDeg previous_dir,
                                 std::size_t t) {
  predictions.push_back(p);
  actual.push_back(actual_dir);
  previous.push_back(previous_dir);
  steps.push_back(t);
}

void PredictionMatrix::append(const PredictionMatrix& other) {
  predictions.insert(predictions.end(), other.predictions.begin(), other.predictions.end());
  actual.insert(actual.end(), other.actual.begin(), other.actual.end());
  previous.insert(previous.end(), other.previous.begin(), other.previous.end());
  steps.insert(steps.end(), other.steps.begin(), other.steps.end());
}

double QuadraticForm::operator()(const SupportVector& w) const noexcept {
  double v = constant;
  for (std::size_t a = 0; a < 3; ++a) {
    v -= 2.0 * linear[a] * w[a];
    for (std::size_t b = 0; b < 3; ++b) v += w[a] * gram[a][b] * w[b];
  }
  return v;
}

QuadraticForm quadratic_form(const PredictionMatrix& m) {
  QuadraticForm q;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto& p = m.predictions[r];
    const std::array<UnitVec2, 3> cols{to_unit(p.hm), to_unit(p.lra), to_unit(p.ar)};
    const UnitVec2 y = to_unit(m.actual[r]);
    for (std::size_t a = 0; a < 3; ++a) {
      q.linear[a] += cols[a].x * y.x + cols[a].y * y.y;
      for (std::size_t b = 0; b < 3; ++b) q.gram[a][b] += cols[a].x * cols[b].x + cols[a].y * cols[b].y;
    }
    q.constant += y.x * y.x + y.y * y.y;
  }
  return q;
}

double support_objective(const PredictionMatrix& m, const SupportVector& w) {
  double total = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto& p = m.predictions[r];
    const UnitVec2 a = to_unit(p.hm), b = to_unit(p.lra), c = to_unit(p.ar);
    const UnitVec2 y = to_unit(m.actual[r]);
    const double dx = w.hm * a.x + w.lra * b.x + w.ar * c.x - y.x;
    const double dy = w.hm * a.y + w.lra * b.y + w.ar * c.y - y.y;
    total += dx * dx + dy * dy;
  }
  return total;
}

SupportVector solve_support_qp(const QuadraticForm& q, const ThresholdVector& kappa) {
  if (!kappa.feasible()) {
    throw Error(ErrorCode::InfeasibleKappa,
                "kappa bounds must lie in [0, 1] and sum to at most 1, got sum " + std::to_string(kappa.sum()));
  }
  Eigen::Matrix3d g;
  Eigen::Vector3d c;
  for (int a = 0; a < 3; ++a) {
    c[a] = q.linear[static_cast<std::size_t>(a)];
    for (int b = 0; b < 3; ++b) g(a, b) = q.gram[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }

  static const std::vector<std::vector<int>> kFaces = {{0, 1, 2}, {0, 1}, {0, 2}, {1, 2}, {0}, {1}, {2}};
  SupportVector best;
  double best_value = std::numeric_limits<double>::infinity();
  bool found = false;
  // Ties are judged relative to the problem scale so that rounding in the
  // expanded quadratic cannot pick a face.
  const double scale_tol = 1e-11 * std::max(1.0, std::abs(q.constant));
  for (const auto& face : kFaces) {
    SupportVector cand;
    if (!solve_face(g, c, kappa, face, cand)) continue;
    const double value = q(cand);
    const double tol = scale_tol;
    if (!found || value < best_value - tol) {
      best = cand;
      best_value = value;
      found = true;
    } else if (value <= best_value + tol && distance_to_uniform(cand) < distance_to_uniform(best)) {
      best = cand;
      best_value = std::min(best_value, value);
    }
  }
  // A vertex face is always feasible, so `found` holds here.
  return best;
}

SupportVector solve_support_qp(const PredictionMatrix& m, const ThresholdVector& kappa) {
  return solve_support_qp(quadratic_form(m), kappa);
}

}  // namespace stratinfer
