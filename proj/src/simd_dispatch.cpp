#include <cstdlib>
#include <string_view>

#include "rupert/simd.hpp"

namespace rupert::simd {

#if defined(RUPERT_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif

const KernelTable* avx2_kernels() {
#if defined(RUPERT_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& selected = [] () -> const KernelTable& {
    const char* forced = std::getenv("RUPERT_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") {
      return scalar_kernels();
    }
    if (const KernelTable* fast = avx2_kernels()) return *fast;
    return scalar_kernels();
  }();
  return selected;
}

}  // namespace rupert::simd
