#pragma once

// Dense double-precision inner loops used by the estimation core.
//
// Every kernel has a scalar reference implementation. On x86-64 an AVX2/FMA
// variant is compiled into a separate translation unit and selected once at
// startup when the CPU supports it. Set GLMDP_SIMD=scalar to pin the scalar
// path (bit-reproducible across machines), GLMDP_SIMD=avx2 to require AVX2.

#include <cstddef>
#include <string_view>

namespace glmdp::kernels {

struct KernelTable {
  std::string_view name;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // G += w * v v^T for a row-major n x n matrix G
  void (*rank1_update)(double w, const double* v, double* g, std::size_t n);
};

const KernelTable& scalar();

// nullptr when the AVX2 variant was not compiled or the CPU lacks AVX2/FMA.
const KernelTable* avx2();

// The table chosen at startup.
const KernelTable& active();

inline double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
inline void axpy(double alpha, const double* x, double* y, std::size_t n) { active().axpy(alpha, x, y, n); }
inline void rank1_update(double w, const double* v, double* g, std::size_t n) {
  active().rank1_update(w, v, g, n);
}

namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void rank1_update_scalar(double w, const double* v, double* g, std::size_t n);
#if defined(GLMDP_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void rank1_update_avx2(double w, const double* v, double* g, std::size_t n);
#endif
}  // namespace detail

}  // namespace glmdp::kernels
