#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace flexfor {

/// A point in the PQ plane: x = active power (kW), y = reactive power (kvar).
struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Raised when a region collapses to fewer than three non-collinear points.
class DegenerateRegion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Convex polygon with counter-clockwise vertices. An empty vertex list is
/// the empty region (e.g. the intersection of disjoint polygons).
class ForPolygon {
 public:
  ForPolygon() = default;

  /// Adopt vertices that already form a convex CCW polygon. Throws
  /// std::invalid_argument if they do not.
  static ForPolygon from_vertices(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const noexcept { return vertices_; }
  bool empty() const noexcept { return vertices_.size() < 3; }

  friend bool operator==(const ForPolygon&, const ForPolygon&) = default;

 private:
  explicit ForPolygon(std::vector<Point2> v) : vertices_(std::move(v)) {}
  std::vector<Point2> vertices_;

  friend ForPolygon convex_hull(std::span<const Point2> points);
  friend ForPolygon intersect(const ForPolygon& a, const ForPolygon& b);
};

/// (b - a) x (c - a); positive for a left turn.
double cross(const Point2& a, const Point2& b, const Point2& c) noexcept;

/// Andrew's monotone chain. Collinear points on the boundary are dropped.
/// Throws DegenerateRegion for fewer than 3 points or an all-collinear set.
ForPolygon convex_hull(std::span<const Point2> points);

/// Shoelace area; 0 for the empty polygon.
double area(const ForPolygon& poly) noexcept;

/// Convex intersection by clipping `a` against every edge of `b`.
/// Returns the empty polygon when the overlap has no area.
ForPolygon intersect(const ForPolygon& a, const ForPolygon& b);

/// |A n B| / |A u B| with the union by inclusion-exclusion. Throws
/// DegenerateRegion if both polygons have zero area.
double jaccard(const ForPolygon& a, const ForPolygon& b);

/// Signed distance from `p` to the polygon boundary, positive inside,
/// negative outside (exact outside only up to the nearest edge line).
double signed_boundary_distance(const ForPolygon& poly, const Point2& p);

bool contains(const ForPolygon& poly, const Point2& p, double tolerance = 0.0);

ForPolygon scaled(const ForPolygon& poly, double factor);

}  // namespace flexfor
