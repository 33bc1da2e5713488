#include "glmdp/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "glmdp/errors.hpp"
#include "glmdp/numerics.hpp"

namespace glmdp {

double lpevi_alpha(const LpeviConfig& config, int horizon, std::size_t n_episodes) {
  const double d = static_cast<double>(config.features.dim());
  const double zeta = std::log(2.0 * d * horizon * static_cast<double>(n_episodes) / config.xi);
  return config.c * d * horizon * std::sqrt(zeta);
}

namespace {

void require_labeled(const TrajectoryDataset& data) {
  if (data.empty()) throw DataError("baseline needs at least one labeled episode");
  if (data.n_unlabeled() != 0) throw DataError("baseline requires fully labeled data");
}

}  // namespace

SolveReport solve_lpevi(const TrajectoryDataset& data, const LpeviConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  require_labeled(data);
  if (!(config.lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (!(config.xi > 0.0 && config.xi < 1.0)) throw ConfigError("xi must lie in (0, 1)");
  if (!(config.c >= 0.0)) throw ConfigError("bonus constant must be nonnegative");

  const int H = data.horizon();
  const std::size_t n = data.size();
  const double alpha = lpevi_alpha(config, H, n);
  PessimisticPolicy policy(H, data.n_actions(), LinkFunction::identity(),
                           FeatureMapPair{FeatureMap::none(), config.features});
  std::vector<StepDiagnostics> diagnostics(static_cast<std::size_t>(H));

  for (int h = H - 1; h >= 0; --h) {
    const auto hs = static_cast<std::size_t>(h);
    Matrix phi(n, config.features.dim());
    Vector targets(n);
    for (std::size_t i = 0; i < n; ++i) {
      const TrajectoryStep& s = data[i][hs];
      config.features.eval(s.state, s.action, phi.row(i));
      targets[i] = *s.reward + (h + 1 < H ? policy.value(h + 1, s.next_state) : 0.0);
    }
    RidgeFit ridge = fit_ridge(phi, targets, config.lambda);
    Matrix scaled = ridge.gram_plus;
    for (std::size_t i = 0; i < scaled.rows() * scaled.cols(); ++i) scaled.data()[i] /= static_cast<double>(n);
    diagnostics[hs].min_eig_gram = min_eigenvalue(scaled);

    PessimisticStep step;
    step.beta = std::move(ridge.beta);
    step.transition_factor = std::move(ridge.factor);
    step.alpha_p = alpha;
    policy.set_step(h, std::move(step));

    double sum_p = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum_p += policy.compute_gamma(h, data[i][hs].state, data[i][hs].action).transition;
    diagnostics[hs].mean_gamma_p = sum_p / static_cast<double>(n);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return SolveReport{std::move(policy), std::move(diagnostics), secs};
}

LinearQPolicy::LinearQPolicy(Vector weights, FeatureMap features, int horizon, int n_actions, bool step_feature)
    : weights_(std::move(weights)),
      features_(std::move(features)),
      horizon_(horizon),
      n_actions_(n_actions),
      step_feature_(step_feature) {
  if (weights_.size() != feature_dim()) throw ConfigError("linear Q weights do not match feature dimension");
}

std::size_t LinearQPolicy::feature_dim() const {
  return features_.dim() + (step_feature_ ? static_cast<std::size_t>(horizon_) : 0);
}

void LinearQPolicy::features(int h, std::span<const double> x, int a, std::span<double> out) const {
  const std::size_t base = features_.dim();
  features_.eval(x, a, out.first(base));
  if (step_feature_) {
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(base), out.end(), 0.0);
    out[base + static_cast<std::size_t>(h)] = 1.0;
  }
}

double LinearQPolicy::q_value(int h, std::span<const double> x, int a) const {
  Vector psi(feature_dim());
  features(h, x, a, psi);
  return dot(psi, weights_);
}

int LinearQPolicy::greedy_action(int h, std::span<const double> x) const {
  std::vector<double> q(static_cast<std::size_t>(n_actions_));
  for (int a = 0; a < n_actions_; ++a) q[static_cast<std::size_t>(a)] = q_value(h, x, a);
  return argmax_lowest(q);
}

namespace {

LinearQPolicy fitted_q_iteration(const TrajectoryDataset& data, const FqiConfig& config, bool step_feature) {
  require_labeled(data);
  if (config.sweeps < 1) throw ConfigError("fitted Q-iteration needs at least one sweep");
  const int H = data.horizon();
  const int A = data.n_actions();
  LinearQPolicy current(Vector(config.features.dim() + (step_feature ? static_cast<std::size_t>(H) : 0), 0.0),
                        config.features, H, A, step_feature);
  const std::size_t dim = current.feature_dim();

  std::vector<const TrajectoryStep*> steps;
  std::vector<int> step_index;
  for (const auto& e : data.episodes()) {
    for (int h = 0; h < H; ++h) {
      steps.push_back(&e[static_cast<std::size_t>(h)]);
      step_index.push_back(h);
    }
  }
  Matrix psi(steps.size(), dim);
  for (std::size_t i = 0; i < steps.size(); ++i) current.features(step_index[i], steps[i]->state, steps[i]->action, psi.row(i));

  // Design is fixed across sweeps; only targets change.
  Matrix gram_plus = gram(psi);
  for (std::size_t i = 0; i < dim; ++i) gram_plus(i, i) += config.lambda;
  auto factor = Cholesky::factor(gram_plus);
  if (!factor) throw SolverError("fitted Q-iteration: Gram matrix is not positive definite");

  Vector targets(steps.size());
  for (int sweep = 0; sweep < config.sweeps; ++sweep) {
    for (std::size_t i = 0; i < steps.size(); ++i) {
      double continuation = 0.0;
      const int h = step_index[i];
      if (h + 1 < H) {
        continuation = current.q_value(h + 1, steps[i]->next_state, 0);
        for (int a = 1; a < A; ++a) continuation = std::max(continuation, current.q_value(h + 1, steps[i]->next_state, a));
      }
      targets[i] = *steps[i]->reward + continuation;
    }
    Vector rhs(dim, 0.0);
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const auto row = psi.row(i);
      for (std::size_t j = 0; j < dim; ++j) rhs[j] += targets[i] * row[j];
    }
    current = LinearQPolicy(factor->solve(rhs), config.features, H, A, step_feature);
  }
  return current;
}

}  // namespace

LinearQPolicy solve_single_q(const TrajectoryDataset& data, const FqiConfig& config) {
  return fitted_q_iteration(data, config, false);
}

LinearQPolicy solve_global_q(const TrajectoryDataset& data, const FqiConfig& config) {
  return fitted_q_iteration(data, config, true);
}

}  // namespace glmdp
