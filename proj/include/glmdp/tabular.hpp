#pragma once

#include <cstdint>
#include <vector>

#include "glmdp/envs.hpp"
#include "glmdp/features.hpp"
#include "glmdp/policy.hpp"

namespace glmdp {

// Finite GLMDP with one-hot (state, action) features, for which the linear
// transition model is exact. States are encoded as 1-vectors holding the
// state index. Rewards are Bernoulli with mean sigmoid(theta_star[h][x*A+a]).
struct TabularEnvSpec {
  int n_states = 5;
  int n_actions = 2;
  int horizon = 3;
  // transition[((h * S + x) * A + a) * S + x']
  std::vector<double> transition;
  std::vector<Vector> theta_star;  // per step, dimension S * A

  double p(int h, int x, int a, int next) const {
    return transition[((static_cast<std::size_t>(h) * n_states + x) * n_actions + a) * n_states + next];
  }
  std::size_t feature_dim() const { return static_cast<std::size_t>(n_states) * n_actions; }

  // Throws ConfigError on shape problems and when a row is not stochastic.
  void validate() const;
};

// Random instance: Dirichlet(1) transition rows, theta_star ~ Uniform(-0.5, 0.5).
TabularEnvSpec random_tabular_spec(int n_states, int n_actions, int horizon, std::uint64_t seed);

FeatureMapPair tabular_features(const TabularEnvSpec& spec);

class TabularEnv final : public Environment {
 public:
  explicit TabularEnv(TabularEnvSpec spec);

  const TabularEnvSpec& spec() const { return spec_; }
  int horizon() const override { return spec_.horizon; }
  int n_actions() const override { return spec_.n_actions; }
  std::size_t state_dim() const override { return 1; }

  Vector initial_state(Rng& rng) const override;  // uniform over states
  double mean_reward(int h, std::span<const double> x, int a) const override;
  double sample_reward(int h, std::span<const double> x, int a, Rng& rng) const override;
  Vector sample_next_state(int h, std::span<const double> x, int a, Rng& rng) const override;

  double mean_reward(int h, int x, int a) const;

 private:
  TabularEnvSpec spec_;
};

inline int state_index(std::span<const double> x) { return static_cast<int>(x[0]); }

// Policy given by a probability table prob[(h * S + x) * A + a].
class TabularPolicy final : public Policy {
 public:
  TabularPolicy(int n_states, int n_actions, int horizon, std::vector<double> probabilities);
  static TabularPolicy deterministic(int n_states, int n_actions, int horizon, const std::vector<int>& actions);

  int n_actions() const override { return n_actions_; }
  void action_probabilities(int h, std::span<const double> x, std::span<double> out) const override;

 private:
  int n_states_;
  int n_actions_;
  int horizon_;
  std::vector<double> probabilities_;
};

struct DpSolution {
  // value[h][x], q[h][x * A + a], policy[h][x]; value has H + 1 rows (last = 0)
  std::vector<Vector> value;
  std::vector<Vector> q;
  std::vector<std::vector<int>> policy;

  // Mean of value[0] under the uniform initial distribution.
  double initial_value() const;
  // The optimal actions as a flat table [h * S + x].
  std::vector<int> flat_policy() const;
};

// Backward induction with exact expectations; greedy ties go to the lowest action.
DpSolution exact_dp(const TabularEnvSpec& spec);

// Exact evaluation of any policy; q[h] holds Q^pi_h.
DpSolution evaluate_policy_exact(const TabularEnvSpec& spec, const Policy& policy);

// beta_star[h] = sum_x' V*_{h+1}(x') mu_h(x'), with mu_h(x') in R^{S A} read
// off the transition table.
std::vector<Vector> transition_coefficients(const TabularEnvSpec& spec, const DpSolution& dp);

// max over (h, x, a) of |Q*_h(x,a) - g(phi_r^T theta*_h) - phi_p^T beta*_h|.
double bellman_completeness_residual(const TabularEnvSpec& spec, const DpSolution& dp);

}  // namespace glmdp
