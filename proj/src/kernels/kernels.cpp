#include "glmdp/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace glmdp::kernels {

namespace {

constexpr KernelTable kScalar{"scalar", &detail::dot_scalar, &detail::axpy_scalar, &detail::rank1_update_scalar};

#if defined(GLMDP_HAVE_AVX2)
constexpr KernelTable kAvx2{"avx2", &detail::dot_avx2, &detail::axpy_avx2, &detail::rank1_update_avx2};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable& select() {
  const char* env = std::getenv("GLMDP_SIMD");
  const std::string want = env ? env : "auto";
  if (want == "scalar") return kScalar;
  const KernelTable* fast = avx2();
  if (want == "avx2") {
    if (!fast) throw std::runtime_error("GLMDP_SIMD=avx2 requested but AVX2/FMA is unavailable");
    return *fast;
  }
  return fast ? *fast : kScalar;
}

}  // namespace

const KernelTable& scalar() { return kScalar; }

const KernelTable* avx2() {
#if defined(GLMDP_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace glmdp::kernels
