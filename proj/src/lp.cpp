#include "rupert/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rupert/error.hpp"
#include "rupert/simd.hpp"

namespace rupert {

namespace lp_detail {
namespace {

constexpr double kPivotTol = 1e-12;
constexpr double kCostTol = 1e-12;
constexpr double kPhaseOneTol = 1e-9;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols, std::span<const double> columns,
          std::span<const double> rhs)
      : rows_(rows), cols_(cols), width_(cols + rows + 1),
        cells_(rows * width_, 0.0), basis_(rows) {
    for (std::size_t k = 0; k < rows; ++k) {
      for (std::size_t j = 0; j < cols; ++j) at(k, j) = columns[j * rows + k];
      at(k, cols + k) = 1.0;
      at(k, width_ - 1) = rhs[k];
      basis_[k] = cols + k;
    }
  }

  double& at(std::size_t k, std::size_t j) { return cells_[k * width_ + j]; }
  double at(std::size_t k, std::size_t j) const { return cells_[k * width_ + j]; }
  double rhs(std::size_t k) const { return at(k, width_ - 1); }
  std::size_t basis(std::size_t k) const { return basis_[k]; }
  bool is_artificial(std::size_t j) const { return j >= cols_; }

  void pivot(std::size_t row, std::size_t col) {
    const double p = at(row, col);
    for (std::size_t j = 0; j < width_; ++j) at(row, j) /= p;
    at(row, col) = 1.0;
    for (std::size_t k = 0; k < rows_; ++k) {
      if (k == row) continue;
      const double f = at(k, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(k, j) -= f * at(row, j);
      at(k, col) = 0.0;
    }
    basis_[row] = col;
  }

  // Runs Bland's rule to optimality for the given costs over all
  // width-1 columns. Artificial columns may enter only when allowed.
  void optimize(std::span<const double> cost, bool artificials_may_enter) {
    const std::size_t limit = 50 * (cols_ + rows_) + 100;
    for (std::size_t iter = 0;; ++iter) {
      if (iter > limit) throw NumericFailure("simplex iteration limit exceeded");
      std::size_t entering = width_;
      for (std::size_t j = 0; j + 1 < width_; ++j) {
        if (!artificials_may_enter && is_artificial(j)) continue;
        double reduced = cost[j];
        for (std::size_t k = 0; k < rows_; ++k) reduced -= cost[basis_[k]] * at(k, j);
        if (reduced < -kCostTol) {
          entering = j;
          break;
        }
      }
      if (entering == width_) return;

      std::size_t leaving = rows_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < rows_; ++k) {
        const double a = at(k, entering);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(rhs(k), 0.0) / a;
        if (ratio < best_ratio ||
            (ratio == best_ratio && leaving < rows_ && basis_[k] < basis_[leaving])) {
          best_ratio = ratio;
          leaving = k;
        }
      }
      if (leaving == rows_) throw NumericFailure("linear program is unbounded");
      pivot(leaving, entering);
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_, cols_, width_;
  std::vector<double> cells_;
  std::vector<std::size_t> basis_;
};

}  // namespace

StandardFormResult solve_standard_form(std::size_t rows,
                                       std::span<const double> columns,
                                       std::span<const double> rhs,
                                       std::span<const double> cost) {
  const std::size_t cols = columns.size() / rows;
  Tableau tab(rows, cols, columns, rhs);

  std::vector<double> phase_one(cols + rows, 0.0);
  std::fill(phase_one.begin() + static_cast<std::ptrdiff_t>(cols), phase_one.end(), 1.0);
  tab.optimize(phase_one, true);

  StandardFormResult out;
  double infeasibility = 0.0;
  for (std::size_t k = 0; k < rows; ++k) {
    if (tab.is_artificial(tab.basis(k))) infeasibility += tab.rhs(k);
  }
  if (infeasibility > kPhaseOneTol) return out;

  for (std::size_t k = 0; k < rows; ++k) {
    if (!tab.is_artificial(tab.basis(k))) continue;
    std::size_t best = cols;
    double best_abs = kPhaseOneTol;
    for (std::size_t j = 0; j < cols; ++j) {
      if (std::abs(tab.at(k, j)) > best_abs) {
        best_abs = std::abs(tab.at(k, j));
        best = j;
      }
    }
    if (best < cols) tab.pivot(k, best);
  }

  std::vector<double> full_cost(cols + rows, 0.0);
  if (!cost.empty()) {
    std::copy(cost.begin(), cost.end(), full_cost.begin());
    tab.optimize(full_cost, false);
  }

  out.feasible = true;
  out.y.assign(cols, 0.0);
  out.basis.resize(rows);
  for (std::size_t k = 0; k < rows; ++k) {
    out.basis[k] = tab.basis(k);
    if (!tab.is_artificial(tab.basis(k))) out.y[tab.basis(k)] = std::max(tab.rhs(k), 0.0);
  }
  out.multipliers.assign(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double m = 0.0;
    for (std::size_t k = 0; k < rows; ++k) m += full_cost[tab.basis(k)] * tab.at(k, cols + r);
    out.multipliers[r] = m;
  }
  for (std::size_t j = 0; j < cols; ++j) out.objective += full_cost[j] * out.y[j];
  return out;
}

}  // namespace lp_detail

FitProgram build_fit_program(const PlanarPolygon& p, const PlanarPolygon& q) {
  FitProgram program;
  program.rows.reserve(p.size() * q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point2 v = p.vertex(i);
    for (std::size_t j = 0; j < q.size(); ++j) {
      const HalfPlane h = q.halfplane(j);
      program.rows.push_back({{dot(h.normal, v), h.normal.x, h.normal.y}, h.offset});
    }
  }
  return program;
}

FitResult fit_scale(const PlanarPolygon& p, const PlanarPolygon& q, FitOptions opts) {
  const std::size_t m = q.size();
  const auto& kernels = simd::active_kernels();

  std::vector<double> support(m);
  kernels.support(p.xs().data(), p.ys().data(), p.size(), q.normal_xs().data(),
                  q.normal_ys().data(), m, support.data());

  std::vector<double> columns(3 * m);
  std::vector<double> cost(m);
  std::vector<double> lengths(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double nx = q.normal_xs()[j];
    const double ny = q.normal_ys()[j];
    const double len = std::hypot(nx, ny);
    lengths[j] = len;
    columns[3 * j + 0] = support[j] / len;
    columns[3 * j + 1] = nx / len;
    columns[3 * j + 2] = ny / len;
    cost[j] = q.offsets()[j] / len;
  }
  const std::array<double, 3> rhs{1.0, 0.0, 0.0};
  const lp_detail::StandardFormResult sol =
      lp_detail::solve_standard_form(3, columns, rhs, cost);
  if (!sol.feasible) throw NumericFailure("fit program dual is infeasible");

  FitResult result;
  result.s_star = sol.multipliers[0];
  result.t_star = {sol.multipliers[1], sol.multipliers[2]};

  double worst = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double lhs = columns[3 * j] * result.s_star + columns[3 * j + 1] * result.t_star.x +
                       columns[3 * j + 2] * result.t_star.y;
    worst = std::max(worst, lhs - cost[j]);
  }
  if (!(worst <= 1e-9) || !std::isfinite(result.s_star)) {
    throw NumericFailure("fit program solution violates a constraint");
  }

  result.dual.assign(p.size() * m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (sol.y[j] == 0.0) continue;
    std::size_t arg = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double d = q.normal_xs()[j] * p.xs()[i] + q.normal_ys()[j] * p.ys()[i];
      if (d > best) {
        best = d;
        arg = i;
      }
    }
    result.dual[arg * m + j] = sol.y[j] / lengths[j];
  }

  if (opts.certify) result.certified = verify_certificate(build_fit_program(p, q), result);
  return result;
}

bool verify_certificate(const FitProgram& program, const FitResult& result) {
  using Real = long double;
  constexpr Real tol = 1e-9L;
  if (result.dual.size() != program.rows.size()) return false;
  if (!std::isfinite(result.s_star)) return false;

  std::array<Real, 3> combo{0.0L, 0.0L, 0.0L};
  Real bound = 0.0L;
  const Real s = result.s_star;
  const Real tx = result.t_star.x;
  const Real ty = result.t_star.y;
  for (std::size_t k = 0; k < program.rows.size(); ++k) {
    const FitRow& row = program.rows[k];
    const Real y = result.dual[k];
    if (!(y >= 0.0L) || !std::isfinite(result.dual[k])) return false;
    for (std::size_t c = 0; c < 3; ++c) combo[c] += y * static_cast<Real>(row.coeff[c]);
    bound += y * static_cast<Real>(row.rhs);

    const Real lhs = static_cast<Real>(row.coeff[0]) * s + static_cast<Real>(row.coeff[1]) * tx +
                     static_cast<Real>(row.coeff[2]) * ty;
    if (lhs - static_cast<Real>(row.rhs) > tol) return false;
  }
  if (std::abs(combo[0] - 1.0L) > tol || std::abs(combo[1]) > tol || std::abs(combo[2]) > tol) {
    return false;
  }
  return std::abs(bound - s) <= tol;
}

double containment_slack(const PlanarPolygon& p, const PlanarPolygon& q, double s, Point2 t) {
  return simd::active_kernels().min_slack(p.xs().data(), p.ys().data(), p.size(),
                                          q.normal_xs().data(), q.normal_ys().data(),
                                          q.offsets().data(), q.size(), s, t.x, t.y);
}

}  // namespace rupert
