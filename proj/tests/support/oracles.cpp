#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;

double rad(double d) { return d * kPi / 180.0; }

}  // namespace

double angle_gap(double a, double b) {
  double d = std::fabs(a - b);
  while (d > 360.0) d -= 360.0;
  return d <= 180.0 ? d : 360.0 - d;
}

double vector_mean_deg(const std::vector<double>& dirs, const std::vector<double>& weights) {
  double x = 0.0, y = 0.0;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    x += weights[k] * std::cos(rad(dirs[k]));
    y += weights[k] * std::sin(rad(dirs[k]));
  }
  return std::atan2(y, x) * 180.0 / kPi;
}

Shift best_shift(const DirectionSeries& leader, const DirectionSeries& follower, std::size_t max_shift, double tol) {
  std::vector<double> sims;
  for (std::size_t s = 0; s <= max_shift; ++s) {
    double total = 0.0;
    const std::size_t overlap = leader.size() - s;
    for (std::size_t t = 0; t < overlap; ++t) total += angle_gap(leader[t].value(), follower[t + s].value());
    sims.push_back(1.0 - total / static_cast<double>(overlap) / 180.0);
  }
  const double best = *std::max_element(sims.begin(), sims.end());
  for (std::size_t s = 0; s < sims.size(); ++s) {
    if (sims[s] >= best - tol) return {best, s};
  }
  return {best, 0};
}

bool follows(const DirectionSeries& leader, const DirectionSeries& follower, double sigma, std::size_t max_shift) {
  return best_shift(leader, follower, max_shift).similarity >= sigma;
}

bool coordinated(const std::vector<DirectionSeries>& series, std::size_t start, std::size_t end, double sigma,
                 std::size_t max_shift) {
  std::vector<DirectionSeries> cut;
  for (const auto& s : series) cut.emplace_back(s.begin() + static_cast<std::ptrdiff_t>(start),
                                                s.begin() + static_cast<std::ptrdiff_t>(end + 1));
  for (std::size_t i = 0; i < cut.size(); ++i) {
    for (std::size_t j = i + 1; j < cut.size(); ++j) {
      if (!follows(cut[i], cut[j], sigma, max_shift) && !follows(cut[j], cut[i], sigma, max_shift)) return false;
    }
  }
  return true;
}

bool circumcircle_empty(const std::vector<Vec2>& pts, std::size_t a, std::size_t b, std::size_t c) {
  // Circumcenter by perpendicular-bisector formula.
  const double ax = pts[a].x, ay = pts[a].y, bx = pts[b].x, by = pts[b].y, cx = pts[c].x, cy = pts[c].y;
  const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  if (std::fabs(d) < 1e-12) return false;
  const double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d;
  const double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d;
  const double r2 = (ax - ux) * (ax - ux) + (ay - uy) * (ay - uy);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k == a || k == b || k == c) continue;
    const double d2 = (pts[k].x - ux) * (pts[k].x - ux) + (pts[k].y - uy) * (pts[k].y - uy);
    if (d2 < r2 * (1.0 - 1e-9)) return false;
  }
  return true;
}

std::vector<std::vector<std::size_t>> empty_circle_neighbors(const std::vector<Vec2>& pts) {
  const std::size_t n = pts.size();
  std::vector<std::vector<std::size_t>> nb(n);
  for (std::size_t i = 0; i < n; ++i) nb[i].push_back(i);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = b + 1; c < n; ++c) {
        if (!circumcircle_empty(pts, a, b, c)) continue;
        for (auto [p, q] : {std::pair{a, b}, std::pair{a, c}, std::pair{b, c}}) {
          nb[p].push_back(q);
          nb[q].push_back(p);
        }
      }
    }
  }
  for (auto& v : nb) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return nb;
}

double mix_sse(const stratinfer::PredictionMatrix& m, double w1, double w2, double w3) {
  double total = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto& p = m.predictions[r];
    const double x = w1 * std::cos(rad(p.hm.value())) + w2 * std::cos(rad(p.lra.value())) +
                     w3 * std::cos(rad(p.ar.value())) - std::cos(rad(m.actual[r].value()));
    const double y = w1 * std::sin(rad(p.hm.value())) + w2 * std::sin(rad(p.lra.value())) +
                     w3 * std::sin(rad(p.ar.value())) - std::sin(rad(m.actual[r].value()));
    total += x * x + y * y;
  }
  return total;
}

double grid_minimum(const stratinfer::PredictionMatrix& m, const stratinfer::ThresholdVector& kappa, double step) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) {
      const double w1 = i * step, w2 = j * step, w3 = 1.0 - w1 - w2;
      if (w1 < kappa.hm || w2 < kappa.lra || w3 < kappa.ar - 1e-12) continue;
      best = std::min(best, mix_sse(m, w1, w2, std::max(0.0, w3)));
    }
  }
  return best;
}

DirectionDeg random_direction(std::mt19937_64& rng) {
  return DirectionDeg(std::uniform_real_distribution<double>(-180.0, 180.0)(rng));
}

std::vector<DirectionSeries> random_series(std::size_t agents, std::size_t steps, std::mt19937_64& rng) {
  std::vector<DirectionSeries> out(agents);
  for (auto& s : out) {
    for (std::size_t t = 0; t < steps; ++t) s.push_back(random_direction(rng));
  }
  return out;
}

}  // namespace oracle
