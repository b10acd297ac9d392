#include "flexfor/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace flexfor {

double cross(const Point2& a, const Point2& b, const Point2& c) noexcept {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

ForPolygon ForPolygon::from_vertices(std::vector<Point2> vertices) {
  const std::size_t n = vertices.size();
  if (n == 0) return ForPolygon{};
  if (n < 3) throw std::invalid_argument("polygon needs at least three vertices");
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]) < 0.0) {
      throw std::invalid_argument("polygon vertices are not convex and counter-clockwise");
    }
  }
  ForPolygon p(std::move(vertices));
  if (area(p) <= 0.0) throw std::invalid_argument("polygon has zero area");
  return p;
}

ForPolygon convex_hull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  if (pts.size() < 3) throw DegenerateRegion("convex hull needs at least three points");
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 0 ? k - 1 : 0);  // last point repeats the first
  if (hull.size() < 3) throw DegenerateRegion("all points are collinear");
  return ForPolygon(std::move(hull));
}

double area(const ForPolygon& poly) noexcept {
  const auto& v = poly.vertices();
  if (v.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return std::max(0.0, 0.5 * twice);
}

ForPolygon intersect(const ForPolygon& a, const ForPolygon& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Point2> out = a.vertices();
  const auto& clip = b.vertices();
  std::vector<Point2> in;
  for (std::size_t e = 0, m = clip.size(); e < m && !out.empty(); ++e) {
    const Point2& c0 = clip[e];
    const Point2& c1 = clip[(e + 1) % m];
    in.swap(out);
    out.clear();
    for (std::size_t i = 0, n = in.size(); i < n; ++i) {
      const Point2& cur = in[i];
      const Point2& nxt = in[(i + 1) % n];
      const double dc = cross(c0, c1, cur);
      const double dn = cross(c0, c1, nxt);
      if (dc >= 0.0) out.push_back(cur);
      if ((dc >= 0.0) != (dn >= 0.0)) {
        const double t = dc / (dc - dn);
        out.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
      }
    }
  }
  if (out.size() < 3) return {};
  // Clipping leaves duplicates and collinear runs behind; rebuilding the hull
  // of the clipped vertices normalizes them.
  try {
    return convex_hull(out);
  } catch (const DegenerateRegion&) {
    return {};
  }
}

double jaccard(const ForPolygon& a, const ForPolygon& b) {
  const double area_a = area(a);
  const double area_b = area(b);
  if (area_a <= 0.0 && area_b <= 0.0) throw DegenerateRegion("jaccard: both regions are degenerate");
  const double inter = area(intersect(a, b));
  const double uni = area_a + area_b - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double signed_boundary_distance(const ForPolygon& poly, const Point2& p) {
  const auto& v = poly.vertices();
  if (v.size() < 3) throw DegenerateRegion("distance to an empty polygon");
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % n];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    d = std::min(d, cross(a, b, p) / len);
  }
  return d;
}

bool contains(const ForPolygon& poly, const Point2& p, double tolerance) {
  return !poly.empty() && signed_boundary_distance(poly, p) >= -tolerance;
}

ForPolygon scaled(const ForPolygon& poly, double factor) {
  std::vector<Point2> v = poly.vertices();
  for (auto& p : v) {
    p.x *= factor;
    p.y *= factor;
  }
  return ForPolygon::from_vertices(std::move(v));
}

}  // namespace flexfor
