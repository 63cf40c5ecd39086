#include "stratinfer/dirmath.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "stratinfer/error.hpp"

namespace stratinfer {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;
constexpr double kRadPerDeg = std::numbers::pi / 180.0;
constexpr double kMinResultant = 1e-12;
constexpr double kStationary = 1e-12;

}  // namespace

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroResultant: return "ZeroResultant";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::NonFinitePosition: return "NonFinitePosition";
    case ErrorCode::EmptyInformedSet: return "EmptyInformedSet";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::NoInformedAgent: return "NoInformedAgent";
    case ErrorCode::InfeasibleKappa: return "InfeasibleKappa";
    case ErrorCode::InconsistentAgents: return "InconsistentAgents";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

double DirectionDeg::normalize(double degrees) {
  if (!std::isfinite(degrees)) {
    throw Error(ErrorCode::InvalidParam, "non-finite direction");
  }
  double v = std::fmod(degrees, 360.0);
  if (v <= -180.0) {
    v += 360.0;
  } else if (v > 180.0) {
    v -= 360.0;
  }
  return v;
}

double dist_dir(DirectionDeg a, DirectionDeg b) noexcept {
  const double d = std::abs(a.value() - b.value());
  return d <= 180.0 ? d : 360.0 - d;
}

UnitVec2 to_unit(DirectionDeg d) noexcept {
  const double r = d.value() * kRadPerDeg;
  return {std::cos(r), std::sin(r)};
}

DirectionDeg direction_of(double x, double y) noexcept {
  // atan2 lands in [-180, 180]; the constructor folds -180 onto 180.
  return DirectionDeg(std::atan2(y, x) * kDegPerRad);
}

DirectionDeg rotate(DirectionDeg d, double degrees) { return DirectionDeg(d.value() + degrees); }

DirectionDeg circular_mean(std::span<const DirectionDeg> dirs, std::span<const double> weights) {
  if (dirs.size() != weights.size()) {
    throw Error(ErrorCode::InvalidParam, "circular_mean: size mismatch");
  }
  const DirectionDeg* first = nullptr;
  bool all_same = true;
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const double w = weights[k];
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::InvalidParam, "circular_mean: weights must be finite and nonnegative");
    }
    if (w == 0.0) continue;
    if (first == nullptr) {
      first = &dirs[k];
    } else if (!(dirs[k] == *first)) {
      all_same = false;
    }
    const UnitVec2 u = to_unit(dirs[k]);
    sx += w * u.x;
    sy += w * u.y;
  }
  if (first == nullptr) {
    throw Error(ErrorCode::InvalidParam, "circular_mean: no positive weight");
  }
  if (all_same) return *first;
  if (std::hypot(sx, sy) < kMinResultant) {
    throw Error(ErrorCode::ZeroResultant, "circular_mean: opposed inputs cancel");
  }
  return direction_of(sx, sy);
}

DirectionDeg circular_mean(std::span<const DirectionDeg> dirs) {
  const std::vector<double> ones(dirs.size(), 1.0);
  return circular_mean(dirs, ones);
}

DirectionSeries directions_from_positions(const PositionSeries& positions) {
  if (positions.size() < 2) {
    throw Error(ErrorCode::TooShort, "position series needs at least 2 points, got " +
                                         std::to_string(positions.size()));
  }
  DirectionSeries out;
  out.reserve(positions.size() - 1);
  DirectionDeg last(0.0);
  for (std::size_t t = 1; t < positions.size(); ++t) {
    const double vx = positions[t].x - positions[t - 1].x;
    const double vy = positions[t].y - positions[t - 1].y;
    if (std::hypot(vx, vy) >= kStationary) {
      last = direction_of(vx, vy);
    }
    out.push_back(last);
  }
  return out;
}

std::vector<DirectionSeries> directions_from_positions(const std::vector<PositionSeries>& positions) {
  std::vector<DirectionSeries> out;
  out.reserve(positions.size());
  for (const auto& p : positions) out.push_back(directions_from_positions(p));
  return out;
}

}  // namespace stratinfer
