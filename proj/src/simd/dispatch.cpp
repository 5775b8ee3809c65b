#include <cstdlib>
#include <cstring>

#include "bppr/simd/kernels.hpp"

namespace bppr::simd {

#ifdef BPPR_HAVE_AVX2
const Kernels& avx2_kernel_table();
#endif

const Kernels* avx2_kernels() {
#ifdef BPPR_HAVE_AVX2
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels& active_kernels() {
  static const Kernels& chosen = [] () -> const Kernels& {
    const char* env = std::getenv("BPPR_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return scalar_kernels();
    if (const Kernels* k = avx2_kernels()) return *k;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace bppr::simd
