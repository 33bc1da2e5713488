#pragma once

#include "glmdp/dataset.hpp"
#include "glmdp/features.hpp"
#include "glmdp/gpevi.hpp"
#include "glmdp/policy.hpp"

namespace glmdp {

// Linear pessimistic value iteration: one ridge regression of r + V_{h+1}
// per step and a single aggregated bonus alpha * sqrt(phi^T (Lambda + lambda I)^{-1} phi)
// with alpha = c * d * H * sqrt(log(2 d H n / xi)).
struct LpeviConfig {
  double lambda = 1.0;
  double xi = 0.01;
  double c = 0.001;
  FeatureMap features;
};

double lpevi_alpha(const LpeviConfig& config, int horizon, std::size_t n_episodes);

SolveReport solve_lpevi(const TrajectoryDataset& data, const LpeviConfig& config);

struct FqiConfig {
  double lambda = 1.0;
  int sweeps = 50;
  FeatureMap features;
};

// Q(h, x, a) = <psi(h, x, a), w> with one weight vector shared by all steps.
// psi is phi(x, a), optionally followed by a one-hot encoding of h.
class LinearQPolicy final : public GreedyPolicy {
 public:
  LinearQPolicy(Vector weights, FeatureMap features, int horizon, int n_actions, bool step_feature);

  int n_actions() const override { return n_actions_; }
  int horizon() const { return horizon_; }
  bool step_feature() const { return step_feature_; }
  const Vector& weights() const { return weights_; }

  std::size_t feature_dim() const;
  void features(int h, std::span<const double> x, int a, std::span<double> out) const;
  double q_value(int h, std::span<const double> x, int a) const;
  int greedy_action(int h, std::span<const double> x) const override;

 private:
  Vector weights_;
  FeatureMap features_;
  int horizon_;
  int n_actions_;
  bool step_feature_;
};

// Fitted Q-iteration on all transitions pooled across steps, shared weights
// and no step information.
LinearQPolicy solve_single_q(const TrajectoryDataset& data, const FqiConfig& config);

// As solve_single_q with a one-hot step indicator appended to the features.
LinearQPolicy solve_global_q(const TrajectoryDataset& data, const FqiConfig& config);

}  // namespace glmdp
