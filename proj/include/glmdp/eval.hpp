#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "glmdp/dataset.hpp"
#include "glmdp/envs.hpp"
#include "glmdp/policy.hpp"

namespace glmdp {

struct OpeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_eval_episodes = 0;
};

// Step-wise importance sampling:
//   V = (1/m) sum_tau sum_h rho_{tau,h} r_h,  rho_{tau,h} = prod_{t<=h} pi(a_t|x_t) / mu(a_t|x_t).
// std_error is the sample standard deviation of the per-episode sums over sqrt(m).
OpeEstimate step_importance_sampling(const TrajectoryDataset& eval_data, const Policy& target, const Policy& behavior);

// Average return of m fresh rollouts; rollout i uses stream (seed, i).
OpeEstimate mc_policy_value(const Environment& env, const Policy& policy, std::size_t m, std::uint64_t seed);

// reference_value - mc_policy_value(policy)
double suboptimality(const Environment& env, const Policy& policy, double reference_value, std::size_t m,
                     std::uint64_t seed);

inline const std::vector<double>& default_c_grid() {
  static const std::vector<double> grid{0.005, 0.001, 0.0005, 0.0001};
  return grid;
}

// Trains a policy on the given training folds with bonus constant c.
using CvFitFn = std::function<std::shared_ptr<const Policy>(const TrajectoryDataset& train, double c)>;

struct CvResult {
  double chosen_c = 0.0;
  std::vector<double> grid;         // deduplicated, descending
  std::vector<double> mean_scores;  // aligned with grid
};

// K-fold cross-validation of c. Folds come from a seeded permutation of the
// labeled episode indices; each held-out fold is scored by step-IS against
// the behavior density. Highest mean score wins; ties go to the larger c.
CvResult cross_validate_c(const TrajectoryDataset& train, const CvFitFn& fit, const Policy& behavior,
                          std::span<const double> grid, std::uint64_t seed, int folds = 5,
                          double target_softening = 0.0);

// Fold index of every labeled episode (same order as train.labeled_part()).
std::vector<int> fold_assignment(std::size_t n_episodes, int folds, std::uint64_t seed);

}  // namespace glmdp
