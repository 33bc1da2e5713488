#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "glmdp/dataset.hpp"
#include "glmdp/features.hpp"
#include "glmdp/link.hpp"
#include "glmdp/numerics.hpp"
#include "glmdp/policy.hpp"

namespace glmdp {

// Hyperparameters of the pessimistic solvers. The bonus scales are derived
// from (c_r, c_p) and the data size; see alpha_r() / alpha_p().
struct GpeviConfig {
  double lambda = 1.0;
  double xi = 0.01;
  double c_r = 0.001;
  double c_p = 0.001;
  LinkFunction link = LinkFunction::logit();
  FeatureMapPair features;
  GlmOptions glm;
};

// SS-GPEVI uses the same fields; its zeta substitutes n + N for n.
using SsGpeviConfig = GpeviConfig;

// alpha_r = c_r * sqrt(d_r * log(H / xi))
double alpha_r(const GpeviConfig& config, int horizon);

// alpha_p = c_p * (d_p + d_r) * H * sqrt(zeta),
// zeta = log(2 (d_r + d_p) H n / xi), times (g_max - g_min) when a range is given.
double alpha_p(const GpeviConfig& config, int horizon, std::size_t n_episodes,
               const std::optional<RewardRange>& range = std::nullopt);

struct StepDiagnostics {
  int glm_iterations = 0;
  double glm_gradient_norm = 0.0;
  double min_eig_sigma = 0.0;  // smallest eigenvalue of Sigma_h / n
  double min_eig_gram = 0.0;   // smallest eigenvalue of (Lambda_h + lambda I) / m
  double mean_gamma_r = 0.0;   // over the (x, a) pairs in the data
  double mean_gamma_p = 0.0;
  double reward_jitter = 0.0;  // added to Sigma_h when it was singular
};

struct SolveReport {
  PessimisticPolicy policy;
  std::vector<StepDiagnostics> diagnostics;  // one entry per step
  double wall_seconds = 0.0;
};

// Pessimistic value iteration on fully labeled data.
SolveReport solve_gpevi(const TrajectoryDataset& data, const GpeviConfig& config);

// Reward model from the labeled episodes only; transition regression and its
// bonus from labeled and reward-free episodes pooled.
SolveReport solve_ssgpevi(const TrajectoryDataset& labeled, const TrajectoryDataset& unlabeled,
                          const SsGpeviConfig& config);

// Unbounded-reward variants: g is normalized by the reward range and so is
// the total bonus; alpha_p carries the range width.
SolveReport solve_gpevi_unbounded(const TrajectoryDataset& data, const GpeviConfig& config,
                                  const RewardRange& range);
SolveReport solve_ssgpevi_unbounded(const TrajectoryDataset& labeled, const TrajectoryDataset& unlabeled,
                                    const SsGpeviConfig& config, const RewardRange& range);

// Reward and transition bonus components at (h, x, a), before normalization.
GammaParts compute_gamma(const PessimisticPolicy& policy, int h, std::span<const double> x, int a);

// Default range for a link over the ball |u| <= norm_bound, widened by 10%
// of its width on each side.
RewardRange default_reward_range(const LinkFunction& link, double norm_bound);

}  // namespace glmdp
