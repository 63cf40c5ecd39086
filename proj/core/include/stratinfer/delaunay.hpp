#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "stratinfer/dirmath.hpp"

namespace stratinfer {

/// Delaunay adjacency of a planar point set.
///
/// neighbors[i] is sorted ascending and contains i itself. With fewer than three
/// points, or when every point is collinear, the adjacency is the complete graph
/// and `complete_fallback` is set. Exact duplicates are separated by a
/// deterministic 1e-9 jitter before triangulating.
struct Triangulation {
  std::vector<std::array<std::size_t, 3>> triangles;
  std::vector<std::vector<std::size_t>> neighbors;
  bool complete_fallback = false;
};

/// Incremental Bowyer-Watson triangulation. Throws Error(NonFinitePosition).
Triangulation triangulate(std::span<const Vec2> points);

}  // namespace stratinfer
