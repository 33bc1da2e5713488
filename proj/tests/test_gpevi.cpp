#include <cmath>

#include "doctest.h"
#include "glmdp/envs.hpp"
#include "glmdp/errors.hpp"
#include "glmdp/gpevi.hpp"
#include "glmdp/tabular.hpp"
#include "test_util.hpp"

using namespace glmdp;

namespace {

// phi(x, a) = e_a in R^A regardless of the state.
FeatureMap action_indicator(int A) {
  return FeatureMap(static_cast<std::size_t>(A),
                    [](std::span<const double>, int a, std::span<double> out) {
                      std::fill(out.begin(), out.end(), 0.0);
                      out[static_cast<std::size_t>(a)] = 1.0;
                    });
}

TrajectoryDataset constant_reward_data(int H, int A, std::size_t n, double reward, std::uint64_t seed) {
  TrajectoryDataset data(H, A, 1);
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<int> act(0, A - 1);
  std::normal_distribution<double> z(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    Episode e;
    double x = z(rng);
    for (int h = 0; h < H; ++h) {
      const double next = z(rng);
      e.push_back({{x}, act(rng), reward, {next}});
      x = next;
    }
    data.add(e);
  }
  return data;
}

GpeviConfig synthetic_config(const SyntheticEnv& env, double c) {
  GpeviConfig cfg;
  cfg.link = env.link();
  cfg.features = env.features();
  cfg.c_r = cfg.c_p = c;
  return cfg;
}

}  // namespace

TEST_CASE("H = 1 with all rewards 0.5 gives Q = 0.5 and action 0") {
  const TrajectoryDataset data = constant_reward_data(1, 3, 30, 0.5, 1);
  GpeviConfig cfg;
  cfg.features = FeatureMapPair::same(action_indicator(3));
  cfg.c_r = cfg.c_p = 0.0;
  const SolveReport report = solve_gpevi(data, cfg);
  const PessimisticStep& s = report.policy.step(0);
  for (double t : s.theta) CHECK(t == 0.0);
  for (double b : s.beta) CHECK(b == 0.0);
  for (double x : {-1.0, 0.0, 2.5}) {
    for (int a = 0; a < 3; ++a) CHECK(report.policy.evaluate_q(0, Vector{x}, a) == 0.5);
    CHECK(report.policy.greedy_action(0, Vector{x}) == 0);
  }
  CHECK(report.diagnostics.size() == 1);
}

TEST_CASE("one identity-link sample: theta is the OLS fit e1 and beta is zero") {
  TrajectoryDataset data(1, 2, 1);
  data.add({{{0.0}, 0, 1.0, {0.0}}});
  GpeviConfig cfg;
  cfg.link = LinkFunction::identity();
  cfg.features = FeatureMapPair::same(action_indicator(2));
  cfg.c_r = cfg.c_p = 0.0;
  const SolveReport report = solve_gpevi(data, cfg);
  const PessimisticStep& s = report.policy.step(0);
  CHECK(s.theta[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(s.theta[1]) <= 1e-12);
  CHECK(s.beta[0] == 0.0);
  CHECK(s.beta[1] == 0.0);
  CHECK(report.policy.evaluate_q(0, Vector{0.0}, 0) == doctest::Approx(std::min(s.theta[0], 1.0)));
}

TEST_CASE("bonus components: alpha_r = 0 and unvisited directions") {
  // data only ever takes action 0, so the action-1 block of Lambda is empty
  TrajectoryDataset data(2, 2, 2);
  Rng rng = make_rng(3);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    Episode e;
    for (int h = 0; h < 2; ++h) e.push_back({{z(rng), z(rng)}, 0, std::bernoulli_distribution(0.4)(rng) ? 1.0 : 0.0, {z(rng), z(rng)}});
    data.add(e);
  }
  GpeviConfig cfg;
  cfg.features = FeatureMapPair::same(block_feature_map(2, 2));
  cfg.c_r = 0.0;
  cfg.c_p = 0.01;
  const SolveReport report = solve_gpevi(data, cfg);
  const double ap = alpha_p(cfg, 2, 50);
  for (int probe = 0; probe < 20; ++probe) {
    const Vector x{z(rng), z(rng)};
    for (int h = 0; h < 2; ++h) {
      CHECK(compute_gamma(report.policy, h, x, 0).reward == 0.0);
      CHECK(compute_gamma(report.policy, h, x, 1).reward == 0.0);
      CHECK(compute_gamma(report.policy, h, x, 1).transition == doctest::Approx(ap).epsilon(1e-12));
    }
  }
}

TEST_CASE("alpha schedules follow the closed forms") {
  GpeviConfig cfg;
  cfg.features = FeatureMapPair::same(block_feature_map(4, 2));  // d_r = d_p = 8
  cfg.c_r = 0.5;
  cfg.c_p = 0.25;
  cfg.xi = 0.01;
  CHECK(alpha_r(cfg, 5) == doctest::Approx(0.5 * std::sqrt(8.0 * std::log(5.0 / 0.01))));
  const double zeta = std::log(2.0 * 16.0 * 5.0 * 300.0 / 0.01);
  CHECK(alpha_p(cfg, 5, 300) == doctest::Approx(0.25 * 16.0 * 5.0 * std::sqrt(zeta)));
  CHECK(alpha_p(cfg, 5, 300, RewardRange{-1.0, 3.0}) == doctest::Approx(4.0 * 0.25 * 16.0 * 5.0 * std::sqrt(zeta)));
}

TEST_CASE("duplicating every transition strictly lowers the transition bonus") {
  const SyntheticEnv env(make_env_spec(3, 2, 3, RewardFamily::binomial, 7));
  UniformPolicy uniform(2);
  const TrajectoryDataset data = generate_episodes(env, uniform, 80, 8);
  TrajectoryDataset doubled = data;
  for (const auto& e : data.episodes()) doubled.add(e);
  GpeviConfig cfg = synthetic_config(env, 0.001);
  // keep alpha_p fixed so only the quadratic form changes
  GpeviConfig cfg2 = cfg;
  cfg2.c_p = cfg.c_p * alpha_p(cfg, 3, 80) / alpha_p(cfg, 3, 160);
  const SolveReport one = solve_gpevi(data, cfg);
  const SolveReport two = solve_gpevi(doubled, cfg2);
  Rng rng = make_rng(9);
  for (int probe = 0; probe < 50; ++probe) {
    const Vector x = testutil::random_vector(3, rng);
    for (int h = 0; h < 3; ++h)
      for (int a = 0; a < 2; ++a)
        CHECK(compute_gamma(two.policy, h, x, a).transition < compute_gamma(one.policy, h, x, a).transition);
  }
}

TEST_CASE("solver is deterministic and validates its inputs") {
  const SyntheticEnv env(make_env_spec(3, 2, 3, RewardFamily::binomial, 11));
  UniformPolicy uniform(2);
  const TrajectoryDataset data = generate_episodes(env, uniform, 60, 12);
  const GpeviConfig cfg = synthetic_config(env, 0.001);
  const SolveReport a = solve_gpevi(data, cfg);
  const SolveReport b = solve_gpevi(data, cfg);
  CHECK(a.policy.same_parameters(b.policy));
  CHECK(a.diagnostics.size() == 3);
  for (const auto& d : a.diagnostics) {
    CHECK(d.glm_gradient_norm <= 1e-8);
    CHECK(d.min_eig_gram > 0.0);
  }

  CHECK_THROWS_AS(solve_gpevi(data.without_rewards(), cfg), DataError);
  CHECK_THROWS_AS(solve_gpevi(data.empty_like(), cfg), DataError);
  GpeviConfig bad = cfg;
  bad.lambda = 0.0;
  CHECK_THROWS_AS(solve_gpevi(data, bad), ConfigError);
}

TEST_CASE("GLM non-convergence is reported with its step") {
  // separable rewards at step 1: the logistic MLE runs off to infinity and
  // needs far more than two Newton steps to flatten the gradient
  TrajectoryDataset data(2, 2, 1);
  for (int i = 0; i < 20; ++i) {
    const int a = i % 2;
    data.add({{{0.0}, a, 0.5, {0.0}}, {{0.0}, a, a == 0 ? 1.0 : 0.0, {0.0}}});
  }
  GpeviConfig cfg;
  cfg.features = FeatureMapPair::same(action_indicator(2));
  cfg.glm.max_iter = 2;
  try {
    solve_gpevi(data, cfg);
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(e.step() == 1);
  }
}

TEST_CASE("tabular instance: c = 0 and n = 1e5 converges to the DP value") {
  const TabularEnvSpec spec = random_tabular_spec(4, 2, 3, 17);
  const TabularEnv env(spec);
  const DpSolution dp = exact_dp(spec);
  const TrajectoryDataset data = testutil::tabular_episodes(env, 100000, 18);
  GpeviConfig cfg;
  cfg.features = tabular_features(spec);
  cfg.c_r = cfg.c_p = 0.0;
  const SolveReport report = solve_gpevi(data, cfg);
  for (int x = 0; x < spec.n_states; ++x) {
    CAPTURE(x);
    CHECK(std::abs(report.policy.value(0, Vector{static_cast<double>(x)}) - dp.value[0][x]) <= 0.05);
  }
}

TEST_CASE("pessimism on the tabular instance with the theoretical schedule") {
  const TabularEnvSpec spec = random_tabular_spec(5, 2, 3, 23);
  const TabularEnv env(spec);
  const DpSolution dp = exact_dp(spec);
  GpeviConfig cfg;
  cfg.features = tabular_features(spec);
  cfg.c_r = cfg.c_p = 1.0;
  int pessimistic = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const TrajectoryDataset data = testutil::tabular_episodes(env, 500, 1000 + static_cast<std::uint64_t>(rep));
    const SolveReport report = solve_gpevi(data, cfg);
    bool ok = true;
    for (int x = 0; x < spec.n_states; ++x)
      ok = ok && report.policy.value(0, Vector{static_cast<double>(x)}) <= dp.value[0][x] + 1e-10;
    pessimistic += ok;
  }
  CHECK(pessimistic >= 99);
}
