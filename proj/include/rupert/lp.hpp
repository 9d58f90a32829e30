#pragma once

// fitScale: the largest s such that s*P + t fits in Q for some translation t.
//
// The program has one row per (vertex of P, edge of Q) pair,
//   <n_j, p_i> s + n_jx t_x + n_jy t_y <= b_j,
// but for s >= 0 only the vertex maximizing <n_j, p_i> matters for edge j,
// so the solver works on the m-row reduction built from the support function
// of P. It runs a dense two-phase simplex (Bland's rule) on the dual,
//   min b^T y  s.t.  sum_j y_j a_j = (1, 0, 0),  y >= 0,
// whose final basis yields both the primal witness and the multipliers
// used as an optimality certificate.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "rupert/geometry.hpp"

namespace rupert {

// Strictness margin for "fits" (s* > 1 + kFitEps) and "cannot fit"
// (s* < 1 - kFitEps). The band in between is inconclusive.
inline constexpr double kFitEps = 1e-9;

struct FitRow {
  std::array<double, 3> coeff;  // over (s, t_x, t_y)
  double rhs = 0.0;
};

struct FitProgram {
  std::vector<FitRow> rows;
};

// Row index is i * |halfplanes(Q)| + j.
FitProgram build_fit_program(const PlanarPolygon& p, const PlanarPolygon& q);

struct FitResult {
  double s_star = 0.0;
  Point2 t_star;
  bool certified = false;
  // Nonnegative multipliers over the rows of build_fit_program(P, Q).
  std::vector<double> dual;
};

struct FitOptions {
  bool certify = false;
};

// Throws NumericFailure if the solver cannot reach 1e-9 feasibility.
FitResult fit_scale(const PlanarPolygon& p, const PlanarPolygon& q, FitOptions opts = {});

// True iff result.dual is a nonnegative vector with dual^T A = (1, 0, 0),
// (s*, t*) satisfies every row, and dual^T rhs agrees with s* to 1e-9.
// Evaluated in long double. Never throws.
bool verify_certificate(const FitProgram& program, const FitResult& result);

// Smallest slack of s*P + t against the halfplanes of Q, in units of Q's
// (unnormalized) normals. Independent of the LP: used to replay witnesses.
double containment_slack(const PlanarPolygon& p, const PlanarPolygon& q, double s, Point2 t);

namespace lp_detail {

struct StandardFormResult {
  bool feasible = false;
  std::vector<double> y;             // primal values of the standard form
  std::vector<std::size_t> basis;    // column per row
  std::vector<double> multipliers;   // c_B^T B^{-1}, one per row
  double objective = 0.0;
};

// min c^T y  s.t.  A y = rhs, y >= 0, with A given column-major as
// columns[k] (length rows). rhs must be >= 0. Phase one only when
// c is empty. Throws NumericFailure on iteration blowup or unboundedness.
StandardFormResult solve_standard_form(std::size_t rows,
                                       std::span<const double> columns,
                                       std::span<const double> rhs,
                                       std::span<const double> cost);

}  // namespace lp_detail

}  // namespace rupert
