#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "rupert/geometry.hpp"

namespace rupert {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend constexpr bool operator==(Vec3, Vec3) = default;
};

// Vertex set of a convex polyhedron. Every vertex is an extreme point of the
// set, and the set is not coplanar.
class Polyhedron {
 public:
  // Throws InvalidParameter if the vertices are fewer than four, coplanar,
  // non-finite, or not in convex position.
  Polyhedron(std::string label, std::vector<Vec3> vertices);

  const std::string& label() const { return label_; }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  std::span<const double> xs() const { return xs_; }
  std::span<const double> ys() const { return ys_; }
  std::span<const double> zs() const { return zs_; }

  double max_vertex_norm() const { return max_norm_; }

  // Whether the vertex set is invariant under (x, y, z) -> (y, -x, -z). This
  // is what makes M_{theta + pi/2, phi} P = -M_{theta, phi} P hold, and with
  // it the reduction of both theta angles to [0, pi/2].
  bool has_quarter_turn_symmetry() const { return quarter_turn_; }

  // FNV-1a over the raw vertex bytes; identifies the polyhedron in manifests.
  std::uint64_t vertex_hash() const;

 private:
  std::string label_;
  std::vector<Vec3> vertices_;
  std::vector<double> xs_, ys_, zs_;
  double max_norm_ = 0.0;
  bool quarter_turn_ = false;
};

// p_0 = (1,1,1), p_1 = (1,-1,-1), p_2 = (-1,1,-1), p_3 = (-1,-1,1) and
// q_i = -a p_i. The apexes stay in convex position only for 1/3 < a < 1;
// anything else throws InvalidParameter.
Polyhedron stellated_tetrahedron(double a);

Polyhedron cube();

// One vertex per line, three whitespace-separated numbers; '#' starts a
// comment line. Throws ParseError on malformed input.
Polyhedron parse_polyhedron(std::istream& in, std::string label);
Polyhedron load_polyhedron(const std::filesystem::path& path);

// Row-major 2x3 matrix.
using Mat23 = std::array<double, 6>;

// M_{theta,phi} = [[-sin t, cos t, 0], [-cos t cos p, -sin t cos p, sin p]].
Mat23 projection_matrix(double theta, double phi);

// R_alpha * M_{theta,phi}.
Mat23 oriented_projection(double alpha, double theta, double phi);

// Largest singular value.
double operator_norm(const Mat23& m);
Mat23 operator-(const Mat23& a, const Mat23& b);

// Projected vertices (not hulled), in vertex order.
std::vector<Point2> project(const Polyhedron& poly, const Mat23& m);

// Convex hull of R_alpha M_{theta,phi} v over the vertices v.
PlanarPolygon shadow(const Polyhedron& poly, double alpha, double theta, double phi);

// An orientation pair: P = R_alpha M_{theta,phi} poly is tested against
// Q = M_{theta_p,phi_p} poly (the second planar rotation is fixed at 0).
struct ParamPoint {
  double alpha = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double theta_p = 0.0;
  double phi_p = 0.0;

  std::array<double, 5> to_array() const { return {alpha, theta, phi, theta_p, phi_p}; }
  static ParamPoint from_array(const std::array<double, 5>& a) {
    return {a[0], a[1], a[2], a[3], a[4]};
  }
  friend constexpr bool operator==(const ParamPoint&, const ParamPoint&) = default;
};

// Lambda = [0,2pi] x [0,pi/2] x [0,pi] x [0,pi/2] x [0,2pi].
inline constexpr std::array<double, 5> kLambdaExtent{
    2.0 * std::numbers::pi, std::numbers::pi / 2.0, std::numbers::pi,
    std::numbers::pi / 2.0, 2.0 * std::numbers::pi};

bool in_lambda(const ParamPoint& p);

struct ShadowPair {
  PlanarPolygon p;
  PlanarPolygon q;
};
ShadowPair shadows(const Polyhedron& poly, const ParamPoint& point);

// Maps any angles into Lambda without changing whether either shadow fits
// in the other. Theta angles are reduced mod pi/2 (each quarter turn rotates
// its shadow by pi, absorbed into alpha); phi > pi is removed by reflecting
// both shadows across the x-axis, which sends alpha to -alpha and phi_p to
// phi_p + pi. Points already in Lambda are returned unchanged. Assumes the
// quarter-turn symmetry; see the overload below.
ParamPoint canonicalize(const ParamPoint& p);

// Identity for polyhedra without the quarter-turn symmetry.
ParamPoint canonicalize(const ParamPoint& p, const Polyhedron& poly);

}  // namespace rupert
