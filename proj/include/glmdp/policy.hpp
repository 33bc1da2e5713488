#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "glmdp/features.hpp"
#include "glmdp/linalg.hpp"
#include "glmdp/link.hpp"
#include "glmdp/rng.hpp"

namespace glmdp {

// A (possibly stochastic) episodic policy over a finite action set. Step
// indices are 0-based throughout the library.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual int n_actions() const = 0;
  virtual void action_probabilities(int h, std::span<const double> x, std::span<double> out) const = 0;

  // Default: inverse-CDF sampling from action_probabilities, one uniform draw.
  virtual int sample_action(int h, std::span<const double> x, Rng& rng) const;

  double probability(int h, std::span<const double> x, int a) const;
};

// Deterministic policies. Probabilities are a point mass on greedy_action and
// sampling consumes no randomness.
class GreedyPolicy : public Policy {
 public:
  virtual int greedy_action(int h, std::span<const double> x) const = 0;

  void action_probabilities(int h, std::span<const double> x, std::span<double> out) const override;
  int sample_action(int h, std::span<const double> x, Rng& rng) const override;
};

// Index of the largest value; ties go to the lowest index.
int argmax_lowest(std::span<const double> values);

class UniformPolicy final : public Policy {
 public:
  explicit UniformPolicy(int n_actions) : n_actions_(n_actions) {}
  int n_actions() const override { return n_actions_; }
  void action_probabilities(int h, std::span<const double> x, std::span<double> out) const override;

 private:
  int n_actions_;
};

// With probability `reference_weight` follow the reference policy, otherwise
// act uniformly at random. The density is weight * pi_ref + (1 - weight) / |A|.
class MixturePolicy final : public Policy {
 public:
  MixturePolicy(std::shared_ptr<const Policy> reference, double reference_weight = 0.7);

  int n_actions() const override { return reference_->n_actions(); }
  void action_probabilities(int h, std::span<const double> x, std::span<double> out) const override;
  int sample_action(int h, std::span<const double> x, Rng& rng) const override;

  const Policy& reference() const { return *reference_; }
  double reference_weight() const { return weight_; }

 private:
  std::shared_ptr<const Policy> reference_;
  double weight_;
};

// (1 - eps) * base + eps / |A|; used to soften greedy OPE targets.
class SoftenedPolicy final : public Policy {
 public:
  SoftenedPolicy(std::shared_ptr<const Policy> base, double epsilon);
  int n_actions() const override { return base_->n_actions(); }
  void action_probabilities(int h, std::span<const double> x, std::span<double> out) const override;

 private:
  std::shared_ptr<const Policy> base_;
  double epsilon_;
};

// Reward range used by the unbounded-reward variants: g is rescaled to
// (g - g_min) / (g_max - g_min).
struct RewardRange {
  double g_min = 0.0;
  double g_max = 1.0;

  double width() const { return g_max - g_min; }
  void validate() const;

  friend bool operator==(const RewardRange&, const RewardRange&) = default;
};

// Fitted quantities of one step of pessimistic value iteration.
struct PessimisticStep {
  Vector theta;                 // reward GLM coefficients, dim d_r
  Vector beta;                  // transition regression coefficients, dim d_p
  Cholesky reward_factor;       // factor of Sigma_h(theta_h)
  Cholesky transition_factor;   // factor of Lambda_h + lambda I
  double alpha_r = 0.0;
  double alpha_p = 0.0;
  bool fitted = false;

  friend bool operator==(const PessimisticStep&, const PessimisticStep&) = default;
};

struct GammaParts {
  double reward = 0.0;
  double transition = 0.0;
  double total() const { return reward + transition; }
};

// Q_h(x,a) = min{ g(phi_r^T theta_h) + phi_p^T beta_h - Gamma_h(x,a), H - h }^+
// with Gamma_h = Gamma_r + Gamma_p. With a reward range set, g is replaced by
// its normalized form and Gamma is divided by the range width.
class PessimisticPolicy final : public GreedyPolicy {
 public:
  PessimisticPolicy(int horizon, int n_actions, LinkFunction link, FeatureMapPair features,
                    std::optional<RewardRange> normalization = std::nullopt);

  int horizon() const { return horizon_; }
  int n_actions() const override { return n_actions_; }
  const LinkFunction& link() const { return link_; }
  const FeatureMapPair& features() const { return features_; }
  const std::optional<RewardRange>& normalization() const { return normalization_; }

  const PessimisticStep& step(int h) const;
  void set_step(int h, PessimisticStep step);

  // Unclipped estimate g(phi_r^T theta) + phi_p^T beta (normalized g when a
  // range is set).
  double bellman_estimate(int h, std::span<const double> x, int a) const;

  // The two bonus components before range normalization.
  GammaParts compute_gamma(int h, std::span<const double> x, int a) const;

  // Bonus actually subtracted in Q: Gamma_r + Gamma_p, divided by the range
  // width when normalized.
  double total_gamma(int h, std::span<const double> x, int a) const;

  double evaluate_q(int h, std::span<const double> x, int a) const;
  void q_values(int h, std::span<const double> x, std::span<double> out) const;
  double value(int h, std::span<const double> x) const;

  int greedy_action(int h, std::span<const double> x) const override;

  // Parameters only (features and link are not comparable).
  bool same_parameters(const PessimisticPolicy& other) const;

 private:
  struct Parts {
    double mean_reward;
    double transition;
    GammaParts gamma;
  };
  Parts parts(int h, std::span<const double> x, int a) const;
  void check_step(int h) const;

  int horizon_;
  int n_actions_;
  LinkFunction link_;
  FeatureMapPair features_;
  std::optional<RewardRange> normalization_;
  std::vector<PessimisticStep> steps_;
};

// Free-function forms of the core operations.
double evaluate_q(const PessimisticPolicy& policy, int h, std::span<const double> x, int a);
int greedy_action(const PessimisticPolicy& policy, int h, std::span<const double> x);

}  // namespace glmdp
