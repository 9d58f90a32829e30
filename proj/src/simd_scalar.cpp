#include "rupert/simd.hpp"

#include <algorithm>
#include <limits>

namespace rupert::simd {
namespace {

void project_scalar(const double* m, const double* xs, const double* ys,
                    const double* zs, std::size_t n, double* out_x,
                    double* out_y) {
  for (std::size_t i = 0; i < n; ++i) {
    out_x[i] = m[0] * xs[i] + m[1] * ys[i] + m[2] * zs[i];
    out_y[i] = m[3] * xs[i] + m[4] * ys[i] + m[5] * zs[i];
  }
}

void support_scalar(const double* px, const double* py, std::size_t n,
                    const double* nx, const double* ny, std::size_t m,
                    double* out) {
  for (std::size_t j = 0; j < m; ++j) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double d = nx[j] * px[i] + ny[j] * py[i];
      best = std::max(best, d);
    }
    out[j] = best;
  }
}

double min_slack_scalar(const double* px, const double* py, std::size_t n,
                        const double* nx, const double* ny, const double* b,
                        std::size_t m, double s, double tx, double ty) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = s * px[i] + tx;
      const double y = s * py[i] + ty;
      const double slack = b[j] - (nx[j] * x + ny[j] * y);
      worst = std::min(worst, slack);
    }
  }
  return worst;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", &project_scalar, &support_scalar,
                                 &min_slack_scalar};
  return table;
}

}  // namespace rupert::simd
