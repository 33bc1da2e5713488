#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace glmdp {

using Vector = std::vector<double>;

// Dense row-major matrix. Sized for the small (d <= a few hundred) systems the
// estimators solve; no expression templates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n, double scale = 1.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);

// y = A x
Vector multiply(const Matrix& a, std::span<const double> x);

// A^T A for a row-major design matrix (rows are observations).
Matrix gram(const Matrix& design);

// max |A(i,j) - A(j,i)|
double asymmetry(const Matrix& a);

// Lower Cholesky factor L of a symmetric positive-definite A = L L^T.
class Cholesky {
 public:
  Cholesky() = default;

  // Returns nullopt when a non-positive pivot appears.
  static std::optional<Cholesky> factor(const Matrix& a);

  // Factors A + jitter*I, multiplying jitter by 10 until it succeeds. The
  // jitter actually applied (0 when none was needed) is reported.
  static Cholesky factor_with_jitter(const Matrix& a, double initial_jitter, double* applied = nullptr);

  std::size_t dim() const { return lower_.rows(); }
  const Matrix& lower() const { return lower_; }

  // Solves L y = b.
  Vector solve_lower(std::span<const double> b) const;
  // Solves A x = b.
  Vector solve(std::span<const double> b) const;
  // v^T A^{-1} v, via one triangular solve.
  double inverse_quad_form(std::span<const double> v) const;

  friend bool operator==(const Cholesky&, const Cholesky&) = default;

 private:
  explicit Cholesky(Matrix lower) : lower_(std::move(lower)) {}
  Matrix lower_;
};

// All eigenvalues of a symmetric matrix (cyclic Jacobi), ascending.
Vector symmetric_eigenvalues(const Matrix& a);

double min_eigenvalue(const Matrix& a);

}  // namespace glmdp
