#include "glmdp/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "glmdp/errors.hpp"
#include "glmdp/kernels.hpp"

namespace glmdp {

Matrix Matrix::identity(std::size_t n, double scale) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = scale;
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ConfigError("dot: dimension mismatch");
  return kernels::dot(a.data(), b.data(), a.size());
}

double norm2(std::span<const double> v) { return std::sqrt(kernels::dot(v.data(), v.data(), v.size())); }

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vector multiply(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw ConfigError("multiply: dimension mismatch");
  Vector y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) y[r] = kernels::dot(a.row(r).data(), x.data(), x.size());
  return y;
}

Matrix gram(const Matrix& design) {
  const std::size_t d = design.cols();
  Matrix g(d, d);
  for (std::size_t r = 0; r < design.rows(); ++r) kernels::rank1_update(1.0, design.row(r).data(), g.data(), d);
  return g;
}

double asymmetry(const Matrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - a(j, i)));
  return worst;
}

std::optional<Cholesky> Cholesky::factor(const Matrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw ConfigError("Cholesky: matrix is not square");
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double* lj = l.row(j).data();
    double diag = a(j, j) - kernels::dot(lj, lj, j);
    if (!(diag > 0.0) || !std::isfinite(diag)) return std::nullopt;
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - kernels::dot(l.row(i).data(), lj, j)) / ljj;
    }
  }
  return Cholesky(std::move(l));
}

Cholesky Cholesky::factor_with_jitter(const Matrix& a, double initial_jitter, double* applied) {
  if (auto f = factor(a)) {
    if (applied) *applied = 0.0;
    return *f;
  }
  double jitter = initial_jitter;
  for (int attempt = 0; attempt < 40; ++attempt, jitter *= 10.0) {
    Matrix shifted = a;
    for (std::size_t i = 0; i < a.rows(); ++i) shifted(i, i) += jitter;
    if (auto f = factor(shifted)) {
      if (applied) *applied = jitter;
      return *f;
    }
  }
  throw SolverError("Cholesky: matrix could not be regularized (non-finite entries?)");
}

Vector Cholesky::solve_lower(std::span<const double> b) const {
  const std::size_t n = dim();
  if (b.size() != n) throw ConfigError("Cholesky::solve_lower: dimension mismatch");
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = (b[i] - kernels::dot(lower_.row(i).data(), y.data(), i)) / lower_(i, i);
  }
  return y;
}

Vector Cholesky::solve(std::span<const double> b) const {
  const std::size_t n = dim();
  Vector x = solve_lower(b);
  // Back substitution with L^T; walks columns of L.
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= lower_(k, ii) * x[k];
    x[ii] = s / lower_(ii, ii);
  }
  return x;
}

double Cholesky::inverse_quad_form(std::span<const double> v) const {
  if (dim() == 0) return 0.0;
  Vector y = solve_lower(v);
  return kernels::dot(y.data(), y.data(), y.size());
}

Vector symmetric_eigenvalues(const Matrix& input) {
  const std::size_t n = input.rows();
  if (input.cols() != n) throw ConfigError("symmetric_eigenvalues: matrix is not square");
  Matrix a = input;
  // symmetrize
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));

  double scale = 0.0;
  for (std::size_t i = 0; i < n * n; ++i) scale = std::max(scale, std::abs(a.data()[i]));
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off <= 1e-30 * std::max(scale * scale, 1e-300)) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double min_eigenvalue(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  return symmetric_eigenvalues(a).front();
}

}  // namespace glmdp
