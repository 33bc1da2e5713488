#include "glmdp/numerics.hpp"

#include <cmath>

#include "glmdp/errors.hpp"
#include "glmdp/kernels.hpp"

namespace glmdp {

namespace {

void check_finite(const Matrix& m, const char* what) {
  for (std::size_t i = 0; i < m.rows() * m.cols(); ++i)
    if (!std::isfinite(m.data()[i])) throw DataError(std::string(what) + ": non-finite feature value");
}

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw DataError(std::string(what) + ": non-finite value");
}

Vector linear_predictor(const Matrix& features, std::span<const double> theta) {
  return multiply(features, theta);
}

}  // namespace

double glm_loss(const Matrix& features, std::span<const double> responses, const LinkFunction& link,
                std::span<const double> theta) {
  const Vector u = linear_predictor(features, theta);
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) total += -responses[i] * u[i] + link.antideriv(u[i]);
  return total / static_cast<double>(u.size());
}

GlmFit fit_glm(const Matrix& features, std::span<const double> responses, const LinkFunction& link,
               const GlmOptions& options) {
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  if (n == 0) throw DataError("fit_glm: no observations");
  if (responses.size() != n) throw ConfigError("fit_glm: response count does not match feature rows");
  check_finite(features, "fit_glm");
  check_finite(responses, "fit_glm");
  if (link.kind() == LinkKind::logit) {
    for (double r : responses)
      if (r < 0.0 || r > 1.0) throw DataError("fit_glm: logit responses must lie in [0, 1]");
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  GlmFit fit;
  fit.theta.assign(d, 0.0);
  double loss = glm_loss(features, responses, link, fit.theta);
  fit.loss_history.push_back(loss);

  Vector grad(d);
  for (int iter = 0;; ++iter) {
    const Vector u = linear_predictor(features, fit.theta);
    std::fill(grad.begin(), grad.end(), 0.0);
    Matrix hessian(d, d);
    for (std::size_t i = 0; i < n; ++i) {
      const double* phi = features.row(i).data();
      kernels::axpy((link.eval(u[i]) - responses[i]) * inv_n, phi, grad.data(), d);
      kernels::rank1_update(link.deriv(u[i]) * inv_n, phi, hessian.data(), d);
    }
    fit.final_gradient_norm = norm_inf(grad);
    fit.iterations = iter;
    if (fit.final_gradient_norm <= options.tol) {
      fit.converged = true;
      break;
    }
    if (iter >= options.max_iter) break;

    const Cholesky factor = Cholesky::factor_with_jitter(hessian, options.jitter);
    Vector step = factor.solve(grad);
    for (double& s : step) s = -s;

    bool accepted = false;
    double t = 1.0;
    Vector trial(d);
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      for (std::size_t j = 0; j < d; ++j) trial[j] = fit.theta[j] + t * step[j];
      const double trial_loss = glm_loss(features, responses, link, trial);
      if (std::isfinite(trial_loss) && trial_loss <= loss) {
        fit.theta = trial;
        loss = trial_loss;
        fit.loss_history.push_back(loss);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }

  fit.sigma_matrix = Matrix(d, d);
  const Vector u = linear_predictor(features, fit.theta);
  for (std::size_t i = 0; i < n; ++i) {
    kernels::rank1_update(link.deriv(u[i]), features.row(i).data(), fit.sigma_matrix.data(), d);
  }
  return fit;
}

RidgeFit fit_ridge(const Matrix& features, std::span<const double> targets, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("fit_ridge: lambda must be positive");
  if (targets.size() != features.rows()) throw ConfigError("fit_ridge: target count does not match feature rows");
  check_finite(features, "fit_ridge");
  check_finite(targets, "fit_ridge");
  const std::size_t d = features.cols();

  RidgeFit fit;
  fit.lambda = lambda;
  fit.gram_plus = gram(features);
  for (std::size_t i = 0; i < d; ++i) fit.gram_plus(i, i) += lambda;

  Vector rhs(d, 0.0);
  for (std::size_t r = 0; r < features.rows(); ++r) {
    if (targets[r] != 0.0) kernels::axpy(targets[r], features.row(r).data(), rhs.data(), d);
  }
  auto factor = Cholesky::factor(fit.gram_plus);
  if (!factor) throw SolverError("fit_ridge: regularized Gram matrix is not positive definite");
  fit.factor = std::move(*factor);
  fit.beta = fit.factor.solve(rhs);
  return fit;
}

double quad_form_bonus(std::span<const double> v, const Cholesky& factor) {
  if (v.size() != factor.dim()) throw ConfigError("quad_form_bonus: dimension mismatch");
  return std::sqrt(factor.inverse_quad_form(v));
}

}  // namespace glmdp
