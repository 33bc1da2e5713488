#include "glmdp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "glmdp/errors.hpp"

namespace glmdp {

namespace {

OpeEstimate summarize(const std::vector<double>& returns) {
  OpeEstimate est;
  est.n_eval_episodes = returns.size();
  if (returns.empty()) return est;
  const double m = static_cast<double>(returns.size());
  est.value = std::accumulate(returns.begin(), returns.end(), 0.0) / m;
  if (returns.size() > 1) {
    double ss = 0.0;
    for (double r : returns) ss += (r - est.value) * (r - est.value);
    est.std_error = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
  }
  return est;
}

}  // namespace

OpeEstimate step_importance_sampling(const TrajectoryDataset& eval_data, const Policy& target, const Policy& behavior) {
  if (eval_data.empty()) throw EvaluationError("step importance sampling needs at least one episode");
  if (eval_data.n_unlabeled() != 0) throw EvaluationError("step importance sampling needs labeled episodes");
  const auto A = static_cast<std::size_t>(eval_data.n_actions());
  std::vector<double> pt(A), pb(A);
  std::vector<double> returns;
  returns.reserve(eval_data.size());
  for (std::size_t e = 0; e < eval_data.size(); ++e) {
    double rho = 1.0;
    double total = 0.0;
    for (std::size_t h = 0; h < eval_data[e].size(); ++h) {
      const TrajectoryStep& s = eval_data[e][h];
      const int step = static_cast<int>(h);
      behavior.action_probabilities(step, s.state, pb);
      const double mu = pb[static_cast<std::size_t>(s.action)];
      if (!(mu > 0.0)) {
        throw EvaluationError("behavior policy gives zero probability to the logged action in episode " +
                              std::to_string(e) + " at step " + std::to_string(h));
      }
      if (rho != 0.0) {
        target.action_probabilities(step, s.state, pt);
        rho *= pt[static_cast<std::size_t>(s.action)] / mu;
      }
      total += rho * *s.reward;
    }
    returns.push_back(total);
  }
  return summarize(returns);
}

OpeEstimate mc_policy_value(const Environment& env, const Policy& policy, std::size_t m, std::uint64_t seed) {
  if (m == 0) throw EvaluationError("Monte-Carlo evaluation needs at least one rollout");
  std::vector<double> returns;
  returns.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Rng rng = make_rng(seed, {streams::kRollout, i});
    Vector x = env.initial_state(rng);
    double total = 0.0;
    for (int h = 0; h < env.horizon(); ++h) {
      const int a = policy.sample_action(h, x, rng);
      total += env.sample_reward(h, x, a, rng);
      if (h + 1 < env.horizon()) x = env.sample_next_state(h, x, a, rng);
    }
    returns.push_back(total);
  }
  return summarize(returns);
}

double suboptimality(const Environment& env, const Policy& policy, double reference_value, std::size_t m,
                     std::uint64_t seed) {
  return reference_value - mc_policy_value(env, policy, m, seed).value;
}

std::vector<int> fold_assignment(std::size_t n_episodes, int folds, std::uint64_t seed) {
  std::vector<std::size_t> order(n_episodes);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_rng(seed, {streams::kFolds});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> fold(n_episodes);
  for (std::size_t pos = 0; pos < n_episodes; ++pos) fold[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(folds));
  return fold;
}

CvResult cross_validate_c(const TrajectoryDataset& train, const CvFitFn& fit, const Policy& behavior,
                          std::span<const double> grid, std::uint64_t seed, int folds, double target_softening) {
  if (grid.empty()) throw ConfigError("cross-validation grid is empty");
  if (folds < 2) throw ConfigError("cross-validation needs at least two folds");
  CvResult result;
  result.grid.assign(grid.begin(), grid.end());
  std::sort(result.grid.begin(), result.grid.end(), std::greater<>());
  result.grid.erase(std::unique(result.grid.begin(), result.grid.end()), result.grid.end());
  if (result.grid.size() == 1) {
    result.chosen_c = result.grid.front();
    result.mean_scores.assign(1, 0.0);
    return result;
  }

  const TrajectoryDataset labeled = train.labeled_part();
  if (labeled.size() < static_cast<std::size_t>(folds)) {
    throw DataError("cross-validation needs at least " + std::to_string(folds) + " labeled episodes");
  }
  const std::vector<int> fold = fold_assignment(labeled.size(), folds, seed);
  std::vector<TrajectoryDataset> train_folds, held_out;
  for (int k = 0; k < folds; ++k) {
    std::vector<std::size_t> in, out;
    for (std::size_t i = 0; i < labeled.size(); ++i) (fold[i] == k ? out : in).push_back(i);
    train_folds.push_back(labeled.select(in));
    held_out.push_back(labeled.select(out));
  }

  result.mean_scores.assign(result.grid.size(), 0.0);
  for (std::size_t g = 0; g < result.grid.size(); ++g) {
    double total = 0.0;
    for (int k = 0; k < folds; ++k) {
      std::shared_ptr<const Policy> policy = fit(train_folds[static_cast<std::size_t>(k)], result.grid[g]);
      if (target_softening > 0.0) policy = std::make_shared<SoftenedPolicy>(policy, target_softening);
      total += step_importance_sampling(held_out[static_cast<std::size_t>(k)], *policy, behavior).value;
    }
    result.mean_scores[g] = total / folds;
  }
  // grid is descending, so strict '>' keeps the larger c on ties
  std::size_t best = 0;
  for (std::size_t g = 1; g < result.grid.size(); ++g)
    if (result.mean_scores[g] > result.mean_scores[best]) best = g;
  result.chosen_c = result.grid[best];
  return result;
}

}  // namespace glmdp
