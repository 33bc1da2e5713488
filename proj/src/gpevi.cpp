#include "glmdp/gpevi.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "glmdp/errors.hpp"

namespace glmdp {

double alpha_r(const GpeviConfig& config, int horizon) {
  const double d_r = static_cast<double>(config.features.reward.dim());
  return config.c_r * std::sqrt(d_r * std::log(horizon / config.xi));
}

double alpha_p(const GpeviConfig& config, int horizon, std::size_t n_episodes,
               const std::optional<RewardRange>& range) {
  const double d_sum =
      static_cast<double>(config.features.reward.dim()) + static_cast<double>(config.features.transition.dim());
  const double zeta = std::log(2.0 * d_sum * horizon * static_cast<double>(n_episodes) / config.xi);
  double alpha = config.c_p * d_sum * horizon * std::sqrt(zeta);
  if (range) alpha *= range->width();
  return alpha;
}

namespace {

void check_config(const GpeviConfig& config) {
  if (!(config.lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (!(config.xi > 0.0 && config.xi < 1.0)) throw ConfigError("xi must lie in (0, 1)");
  if (!(config.c_r >= 0.0) || !(config.c_p >= 0.0)) throw ConfigError("bonus constants must be nonnegative");
}

void check_same_shape(const TrajectoryDataset& a, const TrajectoryDataset& b) {
  if (a.horizon() != b.horizon()) throw DataError("labeled and unlabeled horizons differ");
  if (a.state_dim() != b.state_dim()) throw DataError("labeled and unlabeled state dimensions differ");
  if (a.n_actions() != b.n_actions()) throw DataError("labeled and unlabeled action counts differ");
}

Matrix feature_rows(const FeatureMap& map, const std::vector<const TrajectoryStep*>& steps) {
  Matrix m(steps.size(), map.dim());
  for (std::size_t i = 0; i < steps.size(); ++i) map.eval(steps[i]->state, steps[i]->action, m.row(i));
  return m;
}

// Backward induction shared by all four solvers. `unlabeled` may be empty.
SolveReport solve_pessimistic(const TrajectoryDataset& labeled, const TrajectoryDataset& unlabeled,
                              const GpeviConfig& config, const std::optional<RewardRange>& range) {
  const auto start = std::chrono::steady_clock::now();
  check_config(config);
  if (range) range->validate();
  if (labeled.empty()) throw DataError("solver needs at least one labeled episode");
  if (labeled.n_unlabeled() != 0) throw DataError("labeled dataset contains reward-free episodes");
  if (unlabeled.n_labeled() != 0) throw DataError("unlabeled dataset contains labeled episodes");
  check_same_shape(labeled, unlabeled);

  const int H = labeled.horizon();
  const std::size_t n = labeled.size();
  const std::size_t total = n + unlabeled.size();
  const double a_r = alpha_r(config, H);
  const double a_p = alpha_p(config, H, total, range);

  PessimisticPolicy policy(H, labeled.n_actions(), config.link, config.features, range);
  std::vector<StepDiagnostics> diagnostics(static_cast<std::size_t>(H));

  for (int h = H - 1; h >= 0; --h) {
    const auto hs = static_cast<std::size_t>(h);
    std::vector<const TrajectoryStep*> reward_steps;
    reward_steps.reserve(n);
    for (const auto& e : labeled.episodes()) reward_steps.push_back(&e[hs]);
    std::vector<const TrajectoryStep*> all_steps = reward_steps;
    for (const auto& e : unlabeled.episodes()) all_steps.push_back(&e[hs]);

    PessimisticStep step;
    StepDiagnostics& diag = diagnostics[hs];

    // reward model, labeled data only
    const Matrix phi_r = feature_rows(config.features.reward, reward_steps);
    Vector rewards(n);
    for (std::size_t i = 0; i < n; ++i) rewards[i] = *reward_steps[i]->reward;
    if (phi_r.cols() > 0) {
      GlmFit glm = fit_glm(phi_r, rewards, config.link, config.glm);
      if (!glm.converged) {
        throw SolverError("GLM fit did not converge at step " + std::to_string(h) + " (gradient norm " +
                              std::to_string(glm.final_gradient_norm) + ")",
                          h);
      }
      diag.glm_iterations = glm.iterations;
      diag.glm_gradient_norm = glm.final_gradient_norm;
      Matrix scaled = glm.sigma_matrix;
      for (std::size_t i = 0; i < scaled.rows() * scaled.cols(); ++i) scaled.data()[i] /= static_cast<double>(n);
      diag.min_eig_sigma = min_eigenvalue(scaled);
      step.reward_factor = Cholesky::factor_with_jitter(glm.sigma_matrix, 1e-8, &diag.reward_jitter);
      step.theta = std::move(glm.theta);
    }

    // transition regression on next-step pessimistic values
    const Matrix phi_p = feature_rows(config.features.transition, all_steps);
    Vector targets(all_steps.size(), 0.0);
    if (h + 1 < H) {
      for (std::size_t i = 0; i < all_steps.size(); ++i) targets[i] = policy.value(h + 1, all_steps[i]->next_state);
    }
    RidgeFit ridge = fit_ridge(phi_p, targets, config.lambda);
    Matrix scaled = ridge.gram_plus;
    for (std::size_t i = 0; i < scaled.rows() * scaled.cols(); ++i)
      scaled.data()[i] /= static_cast<double>(all_steps.size());
    diag.min_eig_gram = min_eigenvalue(scaled);
    step.beta = std::move(ridge.beta);
    step.transition_factor = std::move(ridge.factor);
    step.alpha_r = a_r;
    step.alpha_p = a_p;
    policy.set_step(h, std::move(step));

    double sum_r = 0.0, sum_p = 0.0;
    for (const TrajectoryStep* s : all_steps) {
      const GammaParts g = policy.compute_gamma(h, s->state, s->action);
      sum_r += g.reward;
      sum_p += g.transition;
    }
    diag.mean_gamma_r = sum_r / static_cast<double>(all_steps.size());
    diag.mean_gamma_p = sum_p / static_cast<double>(all_steps.size());
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return SolveReport{std::move(policy), std::move(diagnostics), secs};
}

}  // namespace

SolveReport solve_gpevi(const TrajectoryDataset& data, const GpeviConfig& config) {
  return solve_pessimistic(data, data.empty_like(), config, std::nullopt);
}

SolveReport solve_ssgpevi(const TrajectoryDataset& labeled, const TrajectoryDataset& unlabeled,
                          const SsGpeviConfig& config) {
  return solve_pessimistic(labeled, unlabeled, config, std::nullopt);
}

SolveReport solve_gpevi_unbounded(const TrajectoryDataset& data, const GpeviConfig& config,
                                  const RewardRange& range) {
  return solve_pessimistic(data, data.empty_like(), config, range);
}

SolveReport solve_ssgpevi_unbounded(const TrajectoryDataset& labeled, const TrajectoryDataset& unlabeled,
                                    const SsGpeviConfig& config, const RewardRange& range) {
  return solve_pessimistic(labeled, unlabeled, config, range);
}

GammaParts compute_gamma(const PessimisticPolicy& policy, int h, std::span<const double> x, int a) {
  return policy.compute_gamma(h, x, a);
}

RewardRange default_reward_range(const LinkFunction& link, double norm_bound) {
  if (!(norm_bound > 0.0)) throw ConfigError("parameter norm bound must be positive");
  const double lo = link.eval(-norm_bound);
  const double hi = link.eval(norm_bound);
  const double width = hi - lo;
  RewardRange range{lo - 0.1 * width, hi + 0.1 * width};
  range.validate();
  return range;
}

}  // namespace glmdp
