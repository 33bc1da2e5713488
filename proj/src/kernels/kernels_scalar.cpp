#include "glmdp/kernels.hpp"

namespace glmdp::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void rank1_update_scalar(double w, const double* v, double* g, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w * v[i];
    if (wi == 0.0) continue;
    double* row = g + i * n;
    for (std::size_t j = 0; j < n; ++j) row[j] += wi * v[j];
  }
}

}  // namespace glmdp::kernels::detail
