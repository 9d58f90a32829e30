#pragma once

// Convex polygons in the plane: hull construction, halfplane form and the
// tangent-line buffers that absorb vertex perturbations.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rupert {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double norm(Point2 p);

// Outward normal and offset: the polygon is { x : <normal, x> <= offset }.
struct HalfPlane {
  Point2 normal;
  double offset = 0.0;
};

inline constexpr double kCollinearTol = 1e-12;
inline constexpr double kHalfplaneTol = 1e-9;

// A strictly convex polygon with counterclockwise vertices. Coordinates are
// kept in structure-of-arrays form so the SIMD kernels can read them
// directly. Halfplane i is the edge from vertex i to vertex i+1, with the
// unnormalized normal R_{pi/2}(q_i - q_{i+1}).
class PlanarPolygon {
 public:
  // Throws DegenerateInput unless the vertices are CCW, strictly convex and
  // at least three.
  static PlanarPolygon from_ccw(std::span<const Point2> vertices);

  std::size_t size() const { return xs_.size(); }
  Point2 vertex(std::size_t i) const { return {xs_[i], ys_[i]}; }
  std::vector<Point2> vertices() const;
  HalfPlane halfplane(std::size_t j) const { return {{nx_[j], ny_[j]}, b_[j]}; }

  std::span<const double> xs() const { return xs_; }
  std::span<const double> ys() const { return ys_; }
  std::span<const double> normal_xs() const { return nx_; }
  std::span<const double> normal_ys() const { return ny_; }
  std::span<const double> offsets() const { return b_; }

  double area() const;
  Point2 centroid() const;
  // Largest violation max_j (<n_j, p> - b_j) / |n_j|; <= 0 means inside.
  double signed_distance_outside(Point2 p) const;
  bool contains(Point2 p, double tol = kHalfplaneTol) const;

 private:
  PlanarPolygon() = default;

  std::vector<double> xs_, ys_;
  std::vector<double> nx_, ny_, b_;
};

// Andrew's monotone chain. Collinear and duplicate points are dropped; ties
// in the sort are broken lexicographically on (x, y). Throws DegenerateInput
// when fewer than three hull vertices remain.
PlanarPolygon convex_hull(std::span<const Point2> points);

std::vector<HalfPlane> halfplanes(const PlanarPolygon& poly);

// Offsets every edge line by r along its unit normal and intersects. r > 0
// grows the polygon (containing the Minkowski sum with the radius-r disk),
// r < 0 erodes it. Throws EmptyErosion if an erosion leaves no area.
PlanarPolygon buffer(const PlanarPolygon& poly, double r);
std::optional<PlanarPolygon> try_buffer(const PlanarPolygon& poly, double r);

// Image of the polygon under x -> A x + t with A = [[a, b], [c, d]]. A
// reflection (det < 0) is handled by re-hulling.
PlanarPolygon transform(const PlanarPolygon& poly, double a, double b, double c,
                        double d, Point2 t = {});
PlanarPolygon rotate(const PlanarPolygon& poly, double angle);
PlanarPolygon translate(const PlanarPolygon& poly, Point2 t);
PlanarPolygon scale(const PlanarPolygon& poly, double s);

}  // namespace rupert
