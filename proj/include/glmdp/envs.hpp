#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "glmdp/dataset.hpp"
#include "glmdp/features.hpp"
#include "glmdp/link.hpp"
#include "glmdp/policy.hpp"
#include "glmdp/rng.hpp"

namespace glmdp {

// Generative episodic environment with a finite action set.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int horizon() const = 0;
  virtual int n_actions() const = 0;
  virtual std::size_t state_dim() const = 0;

  virtual Vector initial_state(Rng& rng) const = 0;
  virtual double mean_reward(int h, std::span<const double> x, int a) const = 0;
  virtual double sample_reward(int h, std::span<const double> x, int a, Rng& rng) const = 0;
  virtual Vector sample_next_state(int h, std::span<const double> x, int a, Rng& rng) const = 0;
};

enum class RewardFamily { binomial, beta, gaussian };

RewardFamily reward_family_from_name(const std::string& name);
std::string to_string(RewardFamily family);

// Link matching a reward family: logit for binomial/beta, identity for gaussian.
LinkFunction link_for(RewardFamily family);

inline constexpr double kGaussianRewardVariance = 0.1;

struct EnvSpec {
  int d = 8;
  int n_actions = 2;
  int horizon = 5;
  RewardFamily family = RewardFamily::binomial;
  std::vector<Vector> theta_star;  // one vector of size d * n_actions per step
  std::uint64_t seed = 0;

  void validate() const;
};

// Draws theta_star element-wise from Uniform(-0.5, 0.5) using `seed`.
EnvSpec make_env_spec(int d, int n_actions, int horizon, RewardFamily family, std::uint64_t seed);

// phi(x, a): L2-normalized x in block a of a (d * |A|)-vector.
Vector feature_map(std::span<const double> x, int a, int d, int n_actions);

// Acceptance probability of candidate x' from (x, a):
//   min(1, <x (a+1) + a/d, exp(-x')> / (sum(x') (a+1) + a)),
// with negative or non-finite ratios treated as 0.
double acceptance_probability(std::span<const double> x, int a, std::span<const double> candidate);

inline constexpr int kMaxRejectionAttempts = 10000;

// Proposes x' ~ Uniform(-0.5, 0.5)^d until one is accepted.
Vector rejection_transition(std::span<const double> x, int a, int d, Rng& rng);

double sample_reward(const EnvSpec& spec, int h, std::span<const double> x, int a, Rng& rng);

// The reference action with probability 0.7, otherwise uniform.
int behavior_policy_action(const Policy& reference, int h, std::span<const double> x, Rng& rng,
                           double reference_weight = 0.7);

class SyntheticEnv final : public Environment {
 public:
  explicit SyntheticEnv(EnvSpec spec);

  const EnvSpec& spec() const { return spec_; }
  int horizon() const override { return spec_.horizon; }
  int n_actions() const override { return spec_.n_actions; }
  std::size_t state_dim() const override { return static_cast<std::size_t>(spec_.d); }

  LinkFunction link() const { return link_for(spec_.family); }
  FeatureMapPair features() const;

  Vector initial_state(Rng& rng) const override;
  double mean_reward(int h, std::span<const double> x, int a) const override;
  double sample_reward(int h, std::span<const double> x, int a, Rng& rng) const override;
  Vector sample_next_state(int h, std::span<const double> x, int a, Rng& rng) const override;

 private:
  EnvSpec spec_;
};

// Rolls out `count` fully labeled episodes; episode i draws from its own
// stream derived from (seed, i), so results do not depend on ordering.
TrajectoryDataset generate_episodes(const Environment& env, const Policy& behavior, std::size_t count,
                                    std::uint64_t seed);

// The first n_labeled episodes keep rewards; the remaining n_unlabeled are
// stripped. Stripped episodes equal those of a fully labeled draw.
TrajectoryDataset generate_dataset(const Environment& env, const Policy& behavior, std::size_t n_labeled,
                                   std::size_t n_unlabeled, std::uint64_t seed);

// Stand-in for the unknown optimal policy of a synthetic environment: GPEVI
// without bonuses on `pilot_episodes` episodes collected uniformly at random.
std::shared_ptr<const PessimisticPolicy> fit_reference_policy(const SyntheticEnv& env,
                                                              std::size_t pilot_episodes, std::uint64_t seed);

inline constexpr std::size_t kDefaultPilotEpisodes = 10000;

}  // namespace glmdp
