#include <cstdlib>
#include <string>

#include "fuzzybeta/kernels.hpp"

namespace fuzzybeta::kernels {

const KernelTable* avx2_table() {
#if defined(FUZZYBETA_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& select(std::string_view request) {
  if (request == "scalar") return scalar_table();
  const KernelTable* simd = avx2_table();
  return simd ? *simd : scalar_table();
}

const KernelTable& active() {
  static const KernelTable& table = [] () -> const KernelTable& {
    const char* env = std::getenv("FUZZYBETA_SIMD");
    return select(env ? std::string_view(env) : std::string_view());
  }();
  return table;
}

}  // namespace fuzzybeta::kernels
