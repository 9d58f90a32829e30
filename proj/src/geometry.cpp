#include "rupert/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rupert/error.hpp"

namespace rupert {

double norm(Point2 p) { return std::hypot(p.x, p.y); }

PlanarPolygon PlanarPolygon::from_ccw(std::span<const Point2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw DegenerateInput("polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices[i];
    const Point2 b = vertices[(i + 1) % n];
    const Point2 c = vertices[(i + 2) % n];
    if (!std::isfinite(a.x) || !std::isfinite(a.y)) {
      throw DegenerateInput("polygon vertex is not finite");
    }
    if (cross(b - a, c - b) <= kCollinearTol) {
      throw DegenerateInput("polygon is not strictly convex and counterclockwise");
    }
  }

  PlanarPolygon poly;
  poly.xs_.resize(n);
  poly.ys_.resize(n);
  poly.nx_.resize(n);
  poly.ny_.resize(n);
  poly.b_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    poly.xs_[i] = vertices[i].x;
    poly.ys_[i] = vertices[i].y;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 q = vertices[i];
    const Point2 d = q - vertices[(i + 1) % n];
    // R_{pi/2}(x, y) = (-y, x)
    const Point2 normal{-d.y, d.x};
    poly.nx_[i] = normal.x;
    poly.ny_[i] = normal.y;
    poly.b_[i] = dot(normal, q);
  }

  // Strict convexity along consecutive triples does not rule out a polygon
  // that winds around twice.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double excess = poly.nx_[j] * poly.xs_[i] + poly.ny_[j] * poly.ys_[i] - poly.b_[j];
      const double scale = std::max(1.0, std::hypot(poly.nx_[j], poly.ny_[j]));
      if (excess > kHalfplaneTol * scale) {
        throw DegenerateInput("polygon vertices are not in convex position");
      }
    }
  }
  return poly;
}

std::vector<Point2> PlanarPolygon::vertices() const {
  std::vector<Point2> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = vertex(i);
  return out;
}

double PlanarPolygon::area() const {
  double twice = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(vertex(i), vertex((i + 1) % n));
  }
  return 0.5 * twice;
}

Point2 PlanarPolygon::centroid() const {
  const std::size_t n = size();
  double cx = 0.0, cy = 0.0, twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertex(i);
    const Point2 b = vertex((i + 1) % n);
    const double w = cross(a, b);
    twice += w;
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;
  }
  return {cx / (3.0 * twice), cy / (3.0 * twice)};
}

double PlanarPolygon::signed_distance_outside(Point2 p) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < size(); ++j) {
    const double len = std::hypot(nx_[j], ny_[j]);
    worst = std::max(worst, (nx_[j] * p.x + ny_[j] * p.y - b_[j]) / len);
  }
  return worst;
}

bool PlanarPolygon::contains(Point2 p, double tol) const {
  return signed_distance_outside(p) <= tol;
}

PlanarPolygon convex_hull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw DegenerateInput("convex hull needs 3 distinct points");

  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  auto turn = [](Point2 o, Point2 a, Point2 b) { return cross(a - o, b - o); };
  for (const Point2& p : pts) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= kCollinearTol) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Point2 p = pts[i];
    while (k >= lower && turn(hull[k - 2], hull[k - 1], p) <= kCollinearTol) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw DegenerateInput("points are collinear");
  return PlanarPolygon::from_ccw(hull);
}

std::vector<HalfPlane> halfplanes(const PlanarPolygon& poly) {
  std::vector<HalfPlane> out(poly.size());
  for (std::size_t j = 0; j < poly.size(); ++j) out[j] = poly.halfplane(j);
  return out;
}

namespace {

struct UnitLine {
  Point2 u;
  double c;
};

std::vector<UnitLine> offset_lines(const PlanarPolygon& poly, double r) {
  std::vector<UnitLine> lines(poly.size());
  for (std::size_t j = 0; j < poly.size(); ++j) {
    const HalfPlane h = poly.halfplane(j);
    const double len = norm(h.normal);
    lines[j] = {{h.normal.x / len, h.normal.y / len}, h.offset / len + r};
  }
  return lines;
}

// Keeps the part of a convex polygon with <u, x> <= c.
std::vector<Point2> clip(const std::vector<Point2>& poly, const UnitLine& line) {
  std::vector<Point2> out;
  const std::size_t n = poly.size();
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % n];
    const double da = dot(line.u, a) - line.c;
    const double db = dot(line.u, b) - line.c;
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
      const double t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

}  // namespace

std::optional<PlanarPolygon> try_buffer(const PlanarPolygon& poly, double r) {
  if (!std::isfinite(r)) throw InvalidParameter("buffer radius must be finite");
  if (r == 0.0) return poly;
  const std::vector<UnitLine> lines = offset_lines(poly, r);
  const std::size_t n = lines.size();

  std::vector<Point2> pts;
  if (r > 0.0) {
    // Every edge survives an outward offset; vertex k moves to the meeting
    // point of the shifted lines of edges k-1 and k.
    pts.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const UnitLine& a = lines[(k + n - 1) % n];
      const UnitLine& b = lines[k];
      const double det = cross(a.u, b.u);
      pts[k] = {(a.c * b.u.y - b.c * a.u.y) / det, (a.u.x * b.c - b.u.x * a.c) / det};
    }
  } else {
    pts = poly.vertices();
    for (const UnitLine& line : lines) {
      pts = clip(pts, line);
      if (pts.size() < 3) return std::nullopt;
    }
  }
  try {
    PlanarPolygon out = convex_hull(pts);
    if (out.area() <= 0.0) return std::nullopt;
    return out;
  } catch (const DegenerateInput&) {
    if (r > 0.0) throw;
    return std::nullopt;
  }
}

PlanarPolygon buffer(const PlanarPolygon& poly, double r) {
  std::optional<PlanarPolygon> out = try_buffer(poly, r);
  if (!out) throw EmptyErosion("inward buffer leaves an empty polygon");
  return *std::move(out);
}

PlanarPolygon transform(const PlanarPolygon& poly, double a, double b, double c,
                        double d, Point2 t) {
  std::vector<Point2> pts(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 p = poly.vertex(i);
    pts[i] = {a * p.x + b * p.y + t.x, c * p.x + d * p.y + t.y};
  }
  return convex_hull(pts);
}

PlanarPolygon rotate(const PlanarPolygon& poly, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return transform(poly, c, -s, s, c);
}

PlanarPolygon translate(const PlanarPolygon& poly, Point2 t) {
  return transform(poly, 1.0, 0.0, 0.0, 1.0, t);
}

PlanarPolygon scale(const PlanarPolygon& poly, double s) {
  return transform(poly, s, 0.0, 0.0, s);
}

}  // namespace rupert
