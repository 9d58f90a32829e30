#pragma once

// Data-parallel inner loops shared by the projection, LP setup and
// containment replay paths. Every kernel has a scalar reference version and
// an AVX2 version; the AVX2 versions use the same operation order as the
// scalar ones (no FMA contraction) so both produce bit-identical results.

#include <cstddef>
#include <span>
#include <string_view>

namespace rupert::simd {

// out_x[i] = m[0]*xs[i] + m[1]*ys[i] + m[2]*zs[i]
// out_y[i] = m[3]*xs[i] + m[4]*ys[i] + m[5]*zs[i]
using ProjectFn = void (*)(const double* m, const double* xs, const double* ys,
                           const double* zs, std::size_t n, double* out_x,
                           double* out_y);

// out[j] = max_i (nx[j]*px[i] + ny[j]*py[i]), the support function of the
// point set evaluated at each direction.
using SupportFn = void (*)(const double* px, const double* py, std::size_t n,
                           const double* nx, const double* ny, std::size_t m,
                           double* out);

// min over (i, j) of b[j] - (nx[j]*(s*px[i] + tx) + ny[j]*(s*py[i] + ty)).
// Positive iff every point of s*P + t lies strictly inside every halfplane.
using MinSlackFn = double (*)(const double* px, const double* py, std::size_t n,
                              const double* nx, const double* ny,
                              const double* b, std::size_t m, double s,
                              double tx, double ty);

struct KernelTable {
  std::string_view name;
  ProjectFn project;
  SupportFn support;
  MinSlackFn min_slack;
};

const KernelTable& scalar_kernels();

// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_kernels();

// The table selected at first use: AVX2 when available, unless the
// environment variable RUPERT_SIMD=scalar forces the reference kernels.
const KernelTable& active_kernels();

}  // namespace rupert::simd
