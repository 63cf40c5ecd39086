#pragma once

#include <span>
#include <vector>

namespace stratinfer {

/// Heading in degrees, always normalized to the half-open range (-180, 180].
class DirectionDeg {
 public:
  constexpr DirectionDeg() = default;
  explicit DirectionDeg(double degrees) : value_(normalize(degrees)) {}

  double value() const noexcept { return value_; }

  static double normalize(double degrees);

  friend bool operator==(DirectionDeg, DirectionDeg) = default;

 private:
  double value_ = 0.0;
};

struct UnitVec2 {
  double x = 1.0;
  double y = 0.0;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Angular distance in [0, 180].
double dist_dir(DirectionDeg a, DirectionDeg b) noexcept;

UnitVec2 to_unit(DirectionDeg d) noexcept;

/// Angle of (x, y) measured from the positive x axis. Undefined for the zero vector.
DirectionDeg direction_of(double x, double y) noexcept;
inline DirectionDeg direction_of(UnitVec2 u) noexcept { return direction_of(u.x, u.y); }

DirectionDeg rotate(DirectionDeg d, double degrees);

/// Weighted vector mean of headings.
///
/// Each heading is embedded as a unit vector, the weighted sum is formed and its
/// angle returned. When exactly one input carries positive weight, or all
/// positively weighted inputs are identical, that input is returned unchanged.
/// Throws Error(ZeroResultant) when the resultant is shorter than 1e-12 and
/// Error(InvalidParam) on size mismatch, negative weights or no positive weight.
DirectionDeg circular_mean(std::span<const DirectionDeg> dirs, std::span<const double> weights);

/// Equal-weight overload.
DirectionDeg circular_mean(std::span<const DirectionDeg> dirs);

using DirectionSeries = std::vector<DirectionDeg>;
using PositionSeries = std::vector<Vec2>;

/// Heading of each displacement P[t+1] - P[t]; output is one element shorter.
///
/// Stationary steps (|v| < 1e-12) repeat the previous heading; a stationary
/// first step yields 0. Throws Error(TooShort) if a series has fewer than 2 points.
std::vector<DirectionSeries> directions_from_positions(const std::vector<PositionSeries>& positions);

DirectionSeries directions_from_positions(const PositionSeries& positions);

}  // namespace stratinfer
