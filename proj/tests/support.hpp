#pragma once

// Helpers shared by the unit tests and the acceptance runner: seeded random
// polygons and a brute-force fit oracle that shares no code with the LP.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "rupert/geometry.hpp"

namespace rupert::testing {

// Hull of `count` points scattered around an ellipse with random aspect,
// rotation and center. Retries until the hull has at least three vertices.
inline PlanarPolygon random_convex_polygon(std::mt19937_64& rng, int count = 8) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    const double rx = 0.5 + 2.0 * u(rng);
    const double ry = 0.5 + 2.0 * u(rng);
    const double rot = 2.0 * std::numbers::pi * u(rng);
    const Point2 c{4.0 * u(rng) - 2.0, 4.0 * u(rng) - 2.0};
    std::vector<Point2> pts;
    for (int i = 0; i < count; ++i) {
      const double t = 2.0 * std::numbers::pi * u(rng);
      const double r = 0.7 + 0.3 * u(rng);
      const Point2 e{r * rx * std::cos(t), r * ry * std::sin(t)};
      pts.push_back(c + Point2{std::cos(rot) * e.x - std::sin(rot) * e.y,
                               std::sin(rot) * e.x + std::cos(rot) * e.y});
    }
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x; });
    try {
      return convex_hull(pts);
    } catch (...) {
    }
  }
}

// g(s, t) = min over vertices p of P and edges of Q of the Euclidean slack
// of s p + t. Concave in (s, t).
inline double grid_slack(const PlanarPolygon& p, const PlanarPolygon& q, double s, Point2 t) {
  double worst = INFINITY;
  for (std::size_t j = 0; j < q.size(); ++j) {
    const Point2 a = q.vertex(j);
    const Point2 b = q.vertex((j + 1) % q.size());
    const Point2 e = b - a;
    const double len = std::hypot(e.x, e.y);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Point2 x = s * p.vertex(i) + t;
      // Left of a CCW edge is inside.
      worst = std::min(worst, cross(e, x - a) / len);
    }
  }
  return worst;
}

// Maximum of a concave function on [lo, hi]: a 41-node grid scan brackets
// the maximizer within one grid step of the best node, then golden-section
// search narrows the bracket.
template <class F>
double concave_max(F&& f, double lo, double hi) {
  constexpr int kNodes = 41;
  const double step = (hi - lo) / (kNodes - 1);
  int best_k = 0;
  double best = -INFINITY;
  for (int k = 0; k < kNodes; ++k) {
    const double v = f(lo + k * step);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  double a = lo + std::max(0, best_k - 1) * step;
  double b = lo + std::min(kNodes - 1, best_k + 1) * step;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 48; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  return std::max(best, std::max(f1, f2));
}

// max over t of grid_slack at a fixed s; the outer maximum over t_x of the
// inner maximum over t_y is again concave.
inline double best_translation_slack(const PlanarPolygon& p, const PlanarPolygon& q, double s) {
  double lo_x = INFINITY, hi_x = -INFINITY, lo_y = INFINITY, hi_y = -INFINITY;
  for (std::size_t j = 0; j < q.size(); ++j) {
    lo_x = std::min(lo_x, q.vertex(j).x);
    hi_x = std::max(hi_x, q.vertex(j).x);
    lo_y = std::min(lo_y, q.vertex(j).y);
    hi_y = std::max(hi_y, q.vertex(j).y);
  }
  double plo_x = INFINITY, phi_x = -INFINITY, plo_y = INFINITY, phi_y = -INFINITY;
  for (std::size_t i = 0; i < p.size(); ++i) {
    plo_x = std::min(plo_x, s * p.vertex(i).x);
    phi_x = std::max(phi_x, s * p.vertex(i).x);
    plo_y = std::min(plo_y, s * p.vertex(i).y);
    phi_y = std::max(phi_y, s * p.vertex(i).y);
  }
  // Any feasible t keeps s P inside Q's bounding box; pad so the window is
  // never empty.
  const double pad = 1.0;
  const double tx_lo = lo_x - plo_x - pad, tx_hi = hi_x - phi_x + pad;
  const double ty_lo = lo_y - plo_y - pad, ty_hi = hi_y - phi_y + pad;
  return concave_max(
      [&](double tx) {
        return concave_max([&](double ty) { return grid_slack(p, q, s, {tx, ty}); }, ty_lo,
                           std::max(ty_hi, ty_lo + pad));
      },
      tx_lo, std::max(tx_hi, tx_lo + pad));
}

// Bisection on s for the last scale at which some translation fits.
inline double oracle_fit_scale(const PlanarPolygon& p, const PlanarPolygon& q) {
  double lo = 0.0, hi = 1.0;
  while (best_translation_slack(p, q, hi) >= 0.0) hi *= 2.0;
  for (int k = 0; k < 40; ++k) {
    const double mid = 0.5 * (lo + hi);
    (best_translation_slack(p, q, mid) >= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace rupert::testing
