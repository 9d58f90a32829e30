// Compiled with -mavx2 only (no -mfma), see src/CMakeLists.txt.
#include "rupert/simd.hpp"

#include <immintrin.h>

#include <algorithm>
#include <limits>

namespace rupert::simd {
namespace {

void project_avx2(const double* m, const double* xs, const double* ys,
                  const double* zs, std::size_t n, double* out_x,
                  double* out_y) {
  const __m256d m0 = _mm256_set1_pd(m[0]);
  const __m256d m1 = _mm256_set1_pd(m[1]);
  const __m256d m2 = _mm256_set1_pd(m[2]);
  const __m256d m3 = _mm256_set1_pd(m[3]);
  const __m256d m4 = _mm256_set1_pd(m[4]);
  const __m256d m5 = _mm256_set1_pd(m[5]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(xs + i);
    const __m256d y = _mm256_loadu_pd(ys + i);
    const __m256d z = _mm256_loadu_pd(zs + i);
    __m256d u = _mm256_add_pd(_mm256_mul_pd(m0, x), _mm256_mul_pd(m1, y));
    u = _mm256_add_pd(u, _mm256_mul_pd(m2, z));
    __m256d v = _mm256_add_pd(_mm256_mul_pd(m3, x), _mm256_mul_pd(m4, y));
    v = _mm256_add_pd(v, _mm256_mul_pd(m5, z));
    _mm256_storeu_pd(out_x + i, u);
    _mm256_storeu_pd(out_y + i, v);
  }
  for (; i < n; ++i) {
    out_x[i] = m[0] * xs[i] + m[1] * ys[i] + m[2] * zs[i];
    out_y[i] = m[3] * xs[i] + m[4] * ys[i] + m[5] * zs[i];
  }
}

void support_avx2(const double* px, const double* py, std::size_t n,
                  const double* nx, const double* ny, std::size_t m,
                  double* out) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    const __m256d ax = _mm256_loadu_pd(nx + j);
    const __m256d ay = _mm256_loadu_pd(ny + j);
    __m256d best = _mm256_set1_pd(neg_inf);
    for (std::size_t i = 0; i < n; ++i) {
      const __m256d d = _mm256_add_pd(_mm256_mul_pd(ax, _mm256_set1_pd(px[i])),
                                      _mm256_mul_pd(ay, _mm256_set1_pd(py[i])));
      // Operand order matches std::max(best, d) on ties.
      best = _mm256_max_pd(d, best);
    }
    _mm256_storeu_pd(out + j, best);
  }
  for (; j < m; ++j) {
    double best = neg_inf;
    for (std::size_t i = 0; i < n; ++i) {
      best = std::max(best, nx[j] * px[i] + ny[j] * py[i]);
    }
    out[j] = best;
  }
}

double min_slack_avx2(const double* px, const double* py, std::size_t n,
                      const double* nx, const double* ny, const double* b,
                      std::size_t m, double s, double tx, double ty) {
  double worst = std::numeric_limits<double>::infinity();
  const __m256d vs = _mm256_set1_pd(s);
  const __m256d vtx = _mm256_set1_pd(tx);
  const __m256d vty = _mm256_set1_pd(ty);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x =
        _mm256_add_pd(_mm256_mul_pd(vs, _mm256_loadu_pd(px + i)), vtx);
    const __m256d y =
        _mm256_add_pd(_mm256_mul_pd(vs, _mm256_loadu_pd(py + i)), vty);
    __m256d lane_min = _mm256_set1_pd(worst);
    for (std::size_t j = 0; j < m; ++j) {
      const __m256d dot =
          _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(nx[j]), x),
                        _mm256_mul_pd(_mm256_set1_pd(ny[j]), y));
      const __m256d slack = _mm256_sub_pd(_mm256_set1_pd(b[j]), dot);
      lane_min = _mm256_min_pd(slack, lane_min);
    }
    alignas(32) double tmp[4];
    _mm256_store_pd(tmp, lane_min);
    for (double t : tmp) worst = std::min(worst, t);
  }
  for (; i < n; ++i) {
    const double x = s * px[i] + tx;
    const double y = s * py[i] + ty;
    for (std::size_t j = 0; j < m; ++j) {
      worst = std::min(worst, b[j] - (nx[j] * x + ny[j] * y));
    }
  }
  return worst;
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", &project_avx2, &support_avx2,
                                 &min_slack_avx2};
  return table;
}

}  // namespace rupert::simd
