#include "rupert/polyhedron.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "rupert/error.hpp"
#include "rupert/lp.hpp"
#include "rupert/simd.hpp"

namespace rupert {
namespace {

constexpr double kPi = std::numbers::pi;

double dot3(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 sub3(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 cross3(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// v lies in the convex hull of the other vertices iff some convex
// combination of them equals v: a phase-one feasibility problem.
bool is_extreme(const std::vector<Vec3>& vs, std::size_t k) {
  const Vec3 v = vs[k];
  std::array<double, 4> rhs{v.x, v.y, v.z, 1.0};
  std::array<double, 4> sign{1.0, 1.0, 1.0, 1.0};
  for (std::size_t r = 0; r < 4; ++r) {
    if (rhs[r] < 0.0) {
      sign[r] = -1.0;
      rhs[r] = -rhs[r];
    }
  }
  std::vector<double> columns;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i == k) continue;
    columns.push_back(sign[0] * vs[i].x);
    columns.push_back(sign[1] * vs[i].y);
    columns.push_back(sign[2] * vs[i].z);
    columns.push_back(sign[3]);
  }
  const auto sol = lp_detail::solve_standard_form(4, columns, rhs, {});
  return !sol.feasible;
}

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  return r;
}

bool in_closed(double x, double hi) { return x >= 0.0 && x <= hi; }

}  // namespace

Polyhedron::Polyhedron(std::string label, std::vector<Vec3> vertices)
    : label_(std::move(label)), vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 4) throw InvalidParameter("polyhedron needs at least 4 vertices");
  for (const Vec3& v : vertices_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) {
      throw InvalidParameter("polyhedron vertex is not finite");
    }
  }

  bool solid = false;
  for (std::size_t i = 1; i < n && !solid; ++i) {
    for (std::size_t j = i + 1; j < n && !solid; ++j) {
      const Vec3 c = cross3(sub3(vertices_[i], vertices_[0]), sub3(vertices_[j], vertices_[0]));
      for (std::size_t k = j + 1; k < n; ++k) {
        if (std::abs(dot3(c, sub3(vertices_[k], vertices_[0]))) > 1e-9) {
          solid = true;
          break;
        }
      }
    }
  }
  if (!solid) throw InvalidParameter("polyhedron vertices are coplanar");
  for (std::size_t k = 0; k < n; ++k) {
    if (!is_extreme(vertices_, k)) {
      throw InvalidParameter("vertex " + std::to_string(k) + " is not in convex position");
    }
  }

  xs_.reserve(n);
  ys_.reserve(n);
  zs_.reserve(n);
  for (const Vec3& v : vertices_) {
    xs_.push_back(v.x);
    ys_.push_back(v.y);
    zs_.push_back(v.z);
    max_norm_ = std::max(max_norm_, std::sqrt(dot3(v, v)));
  }

  quarter_turn_ = std::all_of(vertices_.begin(), vertices_.end(), [&](Vec3 v) {
    const Vec3 image{v.y, -v.x, -v.z};
    return std::any_of(vertices_.begin(), vertices_.end(), [&](Vec3 w) {
      return std::abs(w.x - image.x) <= 1e-12 && std::abs(w.y - image.y) <= 1e-12 &&
             std::abs(w.z - image.z) <= 1e-12;
    });
  });
}

std::uint64_t Polyhedron::vertex_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (double c : xs_) h = (h ^ std::bit_cast<std::uint64_t>(c)) * 1099511628211ull;
  for (double c : ys_) h = (h ^ std::bit_cast<std::uint64_t>(c)) * 1099511628211ull;
  for (double c : zs_) h = (h ^ std::bit_cast<std::uint64_t>(c)) * 1099511628211ull;
  return h;
}

Polyhedron stellated_tetrahedron(double a) {
  if (!(a > 1.0 / 3.0 && a < 1.0)) {
    throw InvalidParameter("stellation parameter must lie in (1/3, 1)");
  }
  const std::array<Vec3, 4> p{{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}};
  std::vector<Vec3> vs(p.begin(), p.end());
  for (const Vec3& v : p) vs.push_back({-a * v.x, -a * v.y, -a * v.z});
  // Shortest round-trip form, so the label reads back as the same a.
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, a);
  return Polyhedron("stellated:" + std::string(buf, res.ptr), std::move(vs));
}

Polyhedron cube() {
  std::vector<Vec3> vs;
  for (int i = 0; i < 8; ++i) {
    vs.push_back({(i & 1) ? 1.0 : -1.0, (i & 2) ? 1.0 : -1.0, (i & 4) ? 1.0 : -1.0});
  }
  return Polyhedron("cube", std::move(vs));
}

Polyhedron parse_polyhedron(std::istream& in, std::string label) {
  std::vector<Vec3> vs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    Vec3 v;
    std::string extra;
    if (!(fields >> v.x >> v.y >> v.z) || (fields >> extra)) {
      throw ParseError("line " + std::to_string(lineno) + ": expected three numbers");
    }
    vs.push_back(v);
  }
  return Polyhedron(std::move(label), std::move(vs));
}

Polyhedron load_polyhedron(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open polyhedron file " + path.string());
  return parse_polyhedron(in, "file:" + path.string());
}

Mat23 projection_matrix(double theta, double phi) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  return {-st, ct, 0.0, -ct * cp, -st * cp, sp};
}

Mat23 oriented_projection(double alpha, double theta, double phi) {
  const Mat23 m = projection_matrix(theta, phi);
  const double c = std::cos(alpha), s = std::sin(alpha);
  Mat23 out;
  for (int k = 0; k < 3; ++k) {
    out[k] = c * m[k] - s * m[3 + k];
    out[3 + k] = s * m[k] + c * m[3 + k];
  }
  return out;
}

double operator_norm(const Mat23& m) {
  // Largest eigenvalue of the 2x2 Gram matrix m m^T.
  const double a = m[0] * m[0] + m[1] * m[1] + m[2] * m[2];
  const double b = m[0] * m[3] + m[1] * m[4] + m[2] * m[5];
  const double d = m[3] * m[3] + m[4] * m[4] + m[5] * m[5];
  const double half_trace = 0.5 * (a + d);
  const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  return std::sqrt(std::max(0.0, half_trace + disc));
}

Mat23 operator-(const Mat23& a, const Mat23& b) {
  Mat23 out;
  for (std::size_t k = 0; k < 6; ++k) out[k] = a[k] - b[k];
  return out;
}

std::vector<Point2> project(const Polyhedron& poly, const Mat23& m) {
  const std::size_t n = poly.size();
  std::vector<double> px(n), py(n);
  simd::active_kernels().project(m.data(), poly.xs().data(), poly.ys().data(),
                                 poly.zs().data(), n, px.data(), py.data());
  std::vector<Point2> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {px[i], py[i]};
  return out;
}

PlanarPolygon shadow(const Polyhedron& poly, double alpha, double theta, double phi) {
  return convex_hull(project(poly, oriented_projection(alpha, theta, phi)));
}

bool in_lambda(const ParamPoint& p) {
  const auto a = p.to_array();
  for (std::size_t k = 0; k < 5; ++k) {
    if (!in_closed(a[k], kLambdaExtent[k])) return false;
  }
  return true;
}

ShadowPair shadows(const Polyhedron& poly, const ParamPoint& point) {
  return {shadow(poly, point.alpha, point.theta, point.phi),
          shadow(poly, 0.0, point.theta_p, point.phi_p)};
}

ParamPoint canonicalize(const ParamPoint& p) {
  if (in_lambda(p)) return p;
  ParamPoint out = p;
  constexpr double quarter = kPi / 2.0;

  if (!in_closed(out.theta, quarter)) {
    const double turns = std::floor(out.theta / quarter);
    out.theta -= turns * quarter;
    out.alpha += turns * kPi;
  }
  if (!in_closed(out.theta_p, quarter)) {
    const double turns = std::floor(out.theta_p / quarter);
    out.theta_p -= turns * quarter;
    out.alpha -= turns * kPi;
  }
  if (!in_closed(out.phi, 2.0 * kPi)) out.phi = wrap(out.phi, 2.0 * kPi);
  if (out.phi > kPi) {
    out.phi -= kPi;
    out.phi_p += kPi;
    out.alpha = -out.alpha;
  }
  if (!in_closed(out.phi_p, 2.0 * kPi)) out.phi_p = wrap(out.phi_p, 2.0 * kPi);
  if (!in_closed(out.alpha, 2.0 * kPi)) out.alpha = wrap(out.alpha, 2.0 * kPi);
  // fmod can land a hair outside the closed range after the subtraction.
  out.theta = std::clamp(out.theta, 0.0, quarter);
  out.theta_p = std::clamp(out.theta_p, 0.0, quarter);
  return out;
}

ParamPoint canonicalize(const ParamPoint& p, const Polyhedron& poly) {
  return poly.has_quarter_turn_symmetry() ? canonicalize(p) : p;
}

}  // namespace rupert
