#pragma once

#include <span>
#include <vector>

#include "glmdp/linalg.hpp"
#include "glmdp/link.hpp"

namespace glmdp {

struct GlmOptions {
  double tol = 1e-8;   // on the gradient infinity-norm
  int max_iter = 100;
  double jitter = 1e-8;
};

struct GlmFit {
  Vector theta;
  // sum_i g'(<phi_i, theta>) phi_i phi_i^T at the fitted theta (unnormalized)
  Matrix sigma_matrix;
  bool converged = false;
  int iterations = 0;
  double final_gradient_norm = 0.0;
  // Averaged loss at the start and after every accepted step.
  std::vector<double> loss_history;
};

// Canonical-link GLM maximum likelihood: minimizes
//   L(theta) = (1/n) sum_i ( -r_i <phi_i, theta> + G(<phi_i, theta>) )
// by damped Newton from theta = 0 with step halving on L.
GlmFit fit_glm(const Matrix& features, std::span<const double> responses, const LinkFunction& link,
               const GlmOptions& options = {});

double glm_loss(const Matrix& features, std::span<const double> responses, const LinkFunction& link,
                std::span<const double> theta);

struct RidgeFit {
  Vector beta;
  Matrix gram_plus;  // Phi^T Phi + lambda I
  Cholesky factor;   // of gram_plus
  double lambda = 1.0;
};

// beta = (Phi^T Phi + lambda I)^{-1} Phi^T targets. Zero rows are allowed.
RidgeFit fit_ridge(const Matrix& features, std::span<const double> targets, double lambda);

// sqrt(v^T A^{-1} v) for the factored symmetric positive-definite A.
double quad_form_bonus(std::span<const double> v, const Cholesky& factor);

}  // namespace glmdp
