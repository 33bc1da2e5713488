#include "doctest.h"
#include "glmdp/envs.hpp"
#include "glmdp/errors.hpp"
#include "glmdp/gpevi.hpp"
#include "test_util.hpp"

using namespace glmdp;

namespace {

struct Fixture {
  SyntheticEnv env{make_env_spec(4, 3, 4, RewardFamily::binomial, 31)};
  GpeviConfig cfg;
  TrajectoryDataset labeled{4, 3, 4};
  TrajectoryDataset unlabeled{4, 3, 4};

  Fixture() {
    cfg.link = env.link();
    cfg.features = env.features();
    cfg.c_r = cfg.c_p = 0.001;
    UniformPolicy uniform(3);
    const TrajectoryDataset all = generate_episodes(env, uniform, 300, 32);
    std::vector<std::size_t> first, rest;
    for (std::size_t i = 0; i < all.size(); ++i) (i < 90 ? first : rest).push_back(i);
    labeled = all.select(first);
    unlabeled = all.select(rest).without_rewards();
  }
};

}  // namespace

TEST_CASE("no unlabeled episodes reproduces GPEVI bit for bit") {
  Fixture f;
  const SolveReport ss = solve_ssgpevi(f.labeled, f.labeled.empty_like(), f.cfg);
  const SolveReport gp = solve_gpevi(f.labeled, f.cfg);
  CHECK(ss.policy.same_parameters(gp.policy));
}

TEST_CASE("reward parameters come from labeled data only") {
  Fixture f;
  const SolveReport ss = solve_ssgpevi(f.labeled, f.unlabeled, f.cfg);
  const SolveReport gp = solve_gpevi(f.labeled, f.cfg);
  for (int h = 0; h < 4; ++h) {
    CHECK(ss.policy.step(h).theta == gp.policy.step(h).theta);
    CHECK(ss.policy.step(h).reward_factor == gp.policy.step(h).reward_factor);
  }
  CHECK(ss.policy.step(0).alpha_p > gp.policy.step(0).alpha_p);  // zeta uses n + N
}

TEST_CASE("unlabeled copies of the labeled transitions strictly shrink Gamma_p") {
  Fixture f;
  const TrajectoryDataset copy = f.labeled.without_rewards();
  const SolveReport ss = solve_ssgpevi(f.labeled, copy, f.cfg);
  const SolveReport gp = solve_gpevi(f.labeled, f.cfg);
  Rng rng = make_rng(33);
  for (int probe = 0; probe < 50; ++probe) {
    const Vector x = testutil::random_vector(4, rng);
    for (int h = 0; h < 4; ++h)
      for (int a = 0; a < 3; ++a)
        CHECK(compute_gamma(ss.policy, h, x, a).transition < compute_gamma(gp.policy, h, x, a).transition);
  }
}

TEST_CASE("pooled quadratic form never exceeds the labeled-only one (property)") {
  Fixture f;
  const SolveReport ss = solve_ssgpevi(f.labeled, f.unlabeled, f.cfg);
  const SolveReport gp = solve_gpevi(f.labeled, f.cfg);
  Rng rng = make_rng(34);
  for (int probe = 0; probe < 200; ++probe) {
    const Vector x = testutil::random_vector(4, rng, 0.3);
    for (int h = 0; h < 4; ++h) {
      for (int a = 0; a < 3; ++a) {
        const double q_ss = compute_gamma(ss.policy, h, x, a).transition / ss.policy.step(h).alpha_p;
        const double q_gp = compute_gamma(gp.policy, h, x, a).transition / gp.policy.step(h).alpha_p;
        CHECK(q_ss <= q_gp * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("shape mismatches between the two datasets are data errors") {
  Fixture f;
  CHECK_THROWS_AS(solve_ssgpevi(f.labeled, TrajectoryDataset(3, 3, 4), f.cfg), DataError);
  CHECK_THROWS_AS(solve_ssgpevi(f.labeled, f.labeled, f.cfg), DataError);
}
