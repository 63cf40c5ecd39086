#include "stratinfer/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <utility>

#include "stratinfer/error.hpp"

namespace stratinfer {

namespace {

using Real = long double;

struct P {
  Real x;
  Real y;
};

Real orient(const P& a, const P& b, const P& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// > 0 when d lies strictly inside the circumcircle of counter-clockwise (a, b, c).
Real incircle(const P& a, const P& b, const P& c, const P& d) {
  const Real adx = a.x - d.x, ady = a.y - d.y;
  const Real bdx = b.x - d.x, bdy = b.y - d.y;
  const Real cdx = c.x - d.x, cdy = c.y - d.y;
  const Real ad = adx * adx + ady * ady;
  const Real bd = bdx * bdx + bdy * bdy;
  const Real cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

std::vector<P> jittered(std::span<const Vec2> points) {
  std::vector<P> out;
  out.reserve(points.size());
  std::map<std::pair<double, double>, std::size_t> seen;
  for (const auto& v : points) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw Error(ErrorCode::NonFinitePosition, "triangulate: non-finite position");
    }
    const std::size_t copies = seen[{v.x, v.y}]++;
    P p{v.x, v.y};
    if (copies > 0) {
      const double angle = static_cast<double>(copies) * 2.399963229728653;  // golden angle
      p.x += 1e-9L * std::cos(angle);
      p.y += 1e-9L * std::sin(angle);
    }
    out.push_back(p);
  }
  return out;
}

bool all_collinear(const std::vector<P>& pts) {
  Real scale = 0;
  for (const auto& p : pts) {
    scale = std::max({scale, std::abs(p.x - pts[0].x), std::abs(p.y - pts[0].y)});
  }
  if (scale == 0) return true;
  // Farthest point from pts[0] fixes the line.
  std::size_t far = 0;
  Real best = -1;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const Real d = std::hypot(pts[k].x - pts[0].x, pts[k].y - pts[0].y);
    if (d > best) {
      best = d;
      far = k;
    }
  }
  for (const auto& p : pts) {
    if (std::abs(orient(pts[0], pts[far], p)) > 1e-12L * scale * scale) return false;
  }
  return true;
}

std::vector<std::size_t> convex_hull(const std::vector<P>& pts) {
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return pts[a].x < pts[b].x || (pts[a].x == pts[b].x && pts[a].y < pts[b].y);
  });
  std::vector<std::size_t> hull(2 * idx.size());
  std::size_t k = 0;
  for (std::size_t i : idx) {
    while (k >= 2 && orient(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0) --k;
    hull[k++] = i;
  }
  for (std::size_t t = idx.size() - 1, lower = k + 1; t-- > 0;) {
    const std::size_t i = idx[t];
    while (k >= lower && orient(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  return hull;
}

void complete_graph(Triangulation& tri, std::size_t n) {
  tri.complete_fallback = true;
  tri.neighbors.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) tri.neighbors[i].push_back(j);
  }
}

}  // namespace

Triangulation triangulate(std::span<const Vec2> points) {
  const std::size_t n = points.size();
  std::vector<P> pts = jittered(points);
  Triangulation tri;
  if (n < 3 || all_collinear(pts)) {
    complete_graph(tri, n);
    return tri;
  }

  Real minx = pts[0].x, maxx = pts[0].x, miny = pts[0].y, maxy = pts[0].y;
  for (const auto& p : pts) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const Real cx = (minx + maxx) / 2, cy = (miny + maxy) / 2;
  const Real span = std::max({maxx - minx, maxy - miny, Real(1e-9)}) * 1e4L;
  pts.push_back({cx - 2 * span, cy - span});
  pts.push_back({cx + 2 * span, cy - span});
  pts.push_back({cx, cy + 2 * span});

  using Tri = std::array<std::size_t, 3>;
  std::vector<Tri> tris{{n, n + 1, n + 2}};
  for (std::size_t k = 0; k < n; ++k) {
    const P& p = pts[k];
    std::vector<Tri> keep;
    std::map<std::pair<std::size_t, std::size_t>, int> edge_count;
    std::vector<std::pair<std::size_t, std::size_t>> boundary_order;
    for (const Tri& t : tris) {
      if (incircle(pts[t[0]], pts[t[1]], pts[t[2]], p) > 0) {
        for (int e = 0; e < 3; ++e) {
          const std::size_t a = t[e], b = t[(e + 1) % 3];
          const auto key = std::minmax(a, b);
          if (edge_count[key]++ == 0) boundary_order.emplace_back(a, b);
        }
      } else {
        keep.push_back(t);
      }
    }
    for (const auto& [a, b] : boundary_order) {
      if (edge_count[std::minmax(a, b)] != 1) continue;
      // Directed edges of bad triangles are counter-clockwise, so (a, b, k) is too.
      keep.push_back({a, b, k});
    }
    tris = std::move(keep);
  }

  std::vector<std::set<std::size_t>> adj(n);
  for (const Tri& t : tris) {
    if (t[0] >= n || t[1] >= n || t[2] >= n) continue;
    tri.triangles.push_back(t);
    for (int e = 0; e < 3; ++e) {
      adj[t[e]].insert(t[(e + 1) % 3]);
      adj[t[(e + 1) % 3]].insert(t[e]);
    }
  }
  pts.resize(n);
  // A finite super triangle can swallow sliver triangles on the hull; hull edges are always Delaunay.
  const auto hull = convex_hull(pts);
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const std::size_t a = hull[k], b = hull[(k + 1) % hull.size()];
    adj[a].insert(b);
    adj[b].insert(a);
  }
  tri.neighbors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    adj[i].insert(i);
    tri.neighbors[i].assign(adj[i].begin(), adj[i].end());
  }
  return tri;
}

}  // namespace stratinfer
