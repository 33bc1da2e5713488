#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "glmdp/errors.hpp"
#include "glmdp/eval.hpp"
#include "glmdp/gpevi.hpp"
#include "glmdp/tabular.hpp"
#include "test_util.hpp"

using namespace glmdp;

namespace {

class FixedAction final : public GreedyPolicy {
 public:
  FixedAction(int n_actions, int action) : n_actions_(n_actions), action_(action) {}
  int n_actions() const override { return n_actions_; }
  int greedy_action(int, std::span<const double>) const override { return action_; }

 private:
  int n_actions_;
  int action_;
};

// One state, constant reward c at every step.
class ConstantEnv final : public Environment {
 public:
  ConstantEnv(int horizon, double c) : horizon_(horizon), c_(c) {}
  int horizon() const override { return horizon_; }
  int n_actions() const override { return 2; }
  std::size_t state_dim() const override { return 1; }
  Vector initial_state(Rng&) const override { return {0.0}; }
  double mean_reward(int, std::span<const double>, int) const override { return c_; }
  double sample_reward(int, std::span<const double>, int, Rng& rng) const override {
    return c_ == 0.0 ? 0.0 : c_ + std::normal_distribution<double>(0.0, 0.1)(rng);
  }
  Vector sample_next_state(int, std::span<const double>, int, Rng&) const override { return {0.0}; }

 private:
  int horizon_;
  double c_;
};

}  // namespace

TEST_CASE("hand example: rho = (2, 4) gives V = 6") {
  TrajectoryDataset data(2, 2, 1);
  data.add({{{0.0}, 1, 1.0, {0.0}}, {{0.0}, 1, 1.0, {0.0}}});
  const UniformPolicy behavior(2);
  const FixedAction target(2, 1);
  const OpeEstimate est = step_importance_sampling(data, target, behavior);
  CHECK(est.value == 6.0);
  CHECK(est.n_eval_episodes == 1);
}

TEST_CASE("target equal to behavior gives the mean return; disagreement at step 1 gives 0") {
  const TabularEnvSpec spec = random_tabular_spec(3, 2, 3, 1);
  const TabularEnv env(spec);
  const TrajectoryDataset data = testutil::tabular_episodes(env, 200, 2);
  const UniformPolicy behavior(2);
  double mean_return = 0.0;
  for (const auto& e : data.episodes())
    for (const auto& s : e) mean_return += *s.reward;
  mean_return /= 200.0;
  CHECK(step_importance_sampling(data, behavior, behavior).value == doctest::Approx(mean_return).epsilon(1e-14));

  // every logged first action is 0 and the target never plays it
  TrajectoryDataset zeros(2, 2, 1);
  for (int i = 0; i < 10; ++i) zeros.add({{{0.0}, 0, 1.0, {0.0}}, {{0.0}, 1, 1.0, {0.0}}});
  CHECK(step_importance_sampling(zeros, FixedAction(2, 1), behavior).value == 0.0);
}

TEST_CASE("zero behavior probability and unlabeled episodes are evaluation errors") {
  TrajectoryDataset data(1, 2, 1);
  data.add({{{0.0}, 1, 1.0, {0.0}}});
  CHECK_THROWS_AS(step_importance_sampling(data, UniformPolicy(2), FixedAction(2, 0)), EvaluationError);
  CHECK_THROWS_AS(step_importance_sampling(data.without_rewards(), UniformPolicy(2), UniformPolicy(2)), EvaluationError);
  CHECK_THROWS_AS(step_importance_sampling(data.empty_like(), UniformPolicy(2), UniformPolicy(2)), EvaluationError);
}

TEST_CASE("step importance sampling is unbiased over 200 replications") {
  const TabularEnvSpec spec = random_tabular_spec(4, 3, 3, 3);
  const TabularEnv env(spec);
  std::vector<double> probs;
  Rng rng = make_rng(4);
  for (int i = 0; i < 3 * 4; ++i) {
    double a = uniform01(rng) + 0.1, b = uniform01(rng) + 0.1, c = uniform01(rng) + 0.1;
    probs.insert(probs.end(), {a / (a + b + c), b / (a + b + c), c / (a + b + c)});
  }
  const TabularPolicy target(4, 3, 3, probs);
  const double truth = evaluate_policy_exact(spec, target).initial_value();
  const UniformPolicy behavior(3);
  std::vector<double> estimates;
  for (int rep = 0; rep < 200; ++rep) {
    const TrajectoryDataset data = testutil::tabular_episodes(env, 100, 500 + static_cast<std::uint64_t>(rep));
    estimates.push_back(step_importance_sampling(data, target, behavior).value);
  }
  double mean = 0.0, ss = 0.0;
  for (double v : estimates) mean += v;
  mean /= 200.0;
  for (double v : estimates) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / 199.0) / std::sqrt(200.0);
  CHECK(std::abs(mean - truth) <= 3.0 * se);
}

TEST_CASE("Monte-Carlo value of the optimal policy matches DP") {
  const TabularEnvSpec spec = random_tabular_spec(5, 2, 3, 5);
  const TabularEnv env(spec);
  const DpSolution dp = exact_dp(spec);
  const TabularPolicy opt = TabularPolicy::deterministic(5, 2, 3, dp.flat_policy());
  const OpeEstimate mc = mc_policy_value(env, opt, 1000000, 6);
  CHECK(std::abs(mc.value - dp.initial_value()) <= 3.0 * mc.std_error);
  CHECK(std::abs(suboptimality(env, opt, dp.initial_value(), 200000, 7)) <= 3.0 * mc.std_error * std::sqrt(5.0));

  const UniformPolicy uniform(2);
  const OpeEstimate mu = mc_policy_value(env, uniform, 200000, 8);
  CHECK(std::abs(mu.value - evaluate_policy_exact(spec, uniform).initial_value()) <= 3.0 * mu.std_error);
}

TEST_CASE("Monte-Carlo value on constant-reward environments") {
  CHECK(mc_policy_value(ConstantEnv(3, 0.0), UniformPolicy(2), 1000, 1).value == 0.0);
  const OpeEstimate c = mc_policy_value(ConstantEnv(1, 0.7), UniformPolicy(2), 10000, 2);
  CHECK(std::abs(c.value - 0.7) <= 3.0 * c.std_error);
  const OpeEstimate a = mc_policy_value(ConstantEnv(2, 0.7), UniformPolicy(2), 100, 3);
  const OpeEstimate b = mc_policy_value(ConstantEnv(2, 0.7), UniformPolicy(2), 100, 3);
  CHECK(a.value == b.value);
}

TEST_CASE("suboptimality shrinks with more data on the tabular instance (30 seeds)") {
  const TabularEnvSpec spec = random_tabular_spec(4, 2, 3, 9);
  const TabularEnv env(spec);
  const double optimum = exact_dp(spec).initial_value();
  GpeviConfig cfg;
  cfg.features = tabular_features(spec);
  cfg.c_r = cfg.c_p = 0.001;
  auto median_subopt = [&](std::size_t n) {
    std::vector<double> gaps;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const SolveReport r = solve_gpevi(testutil::tabular_episodes(env, n, 1000 + seed), cfg);
      gaps.push_back(optimum - evaluate_policy_exact(spec, r.policy).initial_value());
    }
    std::sort(gaps.begin(), gaps.end());
    return 0.5 * (gaps[14] + gaps[15]);
  };
  const double small = median_subopt(250);
  const double large = median_subopt(2000);
  MESSAGE("median SubOpt n=250: " << small << ", n=2000: " << large);
  CHECK(large < small);
}

TEST_CASE("cross-validation rules") {
  const TabularEnvSpec spec = random_tabular_spec(3, 2, 2, 10);
  const TabularEnv env(spec);
  const TrajectoryDataset data = testutil::tabular_episodes(env, 100, 11);
  const UniformPolicy behavior(2);
  int fits = 0;
  const CvFitFn fit = [&](const TrajectoryDataset& train, double c) -> std::shared_ptr<const Policy> {
    ++fits;
    GpeviConfig cfg;
    cfg.features = tabular_features(spec);
    cfg.c_r = cfg.c_p = c;
    return std::make_shared<PessimisticPolicy>(solve_gpevi(train, cfg).policy);
  };

  SUBCASE("a single grid point is returned without fitting") {
    const std::vector<double> one{0.42};
    CHECK(cross_validate_c(data.empty_like(), fit, behavior, one, 1).chosen_c == 0.42);
    CHECK(fits == 0);
  }
  SUBCASE("duplicates do not change the outcome and the choice is reproducible") {
    const std::vector<double> grid{0.005, 0.001, 0.0005, 0.0001};
    const std::vector<double> dup{0.001, 0.005, 0.001, 0.0001, 0.0005, 0.0005};
    const CvResult a = cross_validate_c(data, fit, behavior, grid, 12);
    const CvResult b = cross_validate_c(data, fit, behavior, dup, 12);
    const CvResult c = cross_validate_c(data, fit, behavior, grid, 12);
    CHECK(a.chosen_c == b.chosen_c);
    CHECK(a.mean_scores == b.mean_scores);
    CHECK(a.chosen_c == c.chosen_c);
    CHECK(a.grid == grid);
    CHECK(std::find(grid.begin(), grid.end(), a.chosen_c) != grid.end());
  }
  SUBCASE("ties go to the larger c") {
    const CvFitFn constant = [](const TrajectoryDataset&, double) -> std::shared_ptr<const Policy> {
      return std::make_shared<UniformPolicy>(2);
    };
    const std::vector<double> grid{0.1, 0.3, 0.2};
    CHECK(cross_validate_c(data, constant, behavior, grid, 13).chosen_c == 0.3);
  }
  SUBCASE("too few labeled episodes for the folds") {
    const std::vector<double> grid{0.1, 0.2};
    std::vector<std::size_t> idx{0, 1, 2};
    CHECK_THROWS_AS(cross_validate_c(data.select(idx), fit, behavior, grid, 14), DataError);
  }
}

TEST_CASE("fold assignment depends only on the seed and the episode index") {
  const std::vector<int> a = fold_assignment(103, 5, 7);
  const std::vector<int> b = fold_assignment(103, 5, 7);
  CHECK(a == b);
  CHECK(fold_assignment(103, 5, 8) != a);
  std::vector<int> sizes(5, 0);
  for (int f : a) ++sizes[static_cast<std::size_t>(f)];
  for (int s : sizes) CHECK((s == 20 || s == 21));
}
