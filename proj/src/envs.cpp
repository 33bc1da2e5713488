#include "glmdp/envs.hpp"

#include <cmath>

#include "glmdp/errors.hpp"
#include "glmdp/gpevi.hpp"

namespace glmdp {

RewardFamily reward_family_from_name(const std::string& name) {
  if (name == "binomial" || name == "logistic") return RewardFamily::binomial;
  if (name == "beta") return RewardFamily::beta;
  if (name == "gaussian") return RewardFamily::gaussian;
  throw ConfigError("unknown reward family: " + name);
}

std::string to_string(RewardFamily family) {
  switch (family) {
    case RewardFamily::binomial: return "binomial";
    case RewardFamily::beta: return "beta";
    case RewardFamily::gaussian: return "gaussian";
  }
  return "?";
}

LinkFunction link_for(RewardFamily family) {
  return family == RewardFamily::gaussian ? LinkFunction::identity() : LinkFunction::logit();
}

void EnvSpec::validate() const {
  if (d <= 0 || n_actions <= 0 || horizon <= 0) throw ConfigError("environment dimensions must be positive");
  if (theta_star.size() != static_cast<std::size_t>(horizon)) throw ConfigError("theta_star needs one entry per step");
  for (const auto& t : theta_star)
    if (t.size() != static_cast<std::size_t>(d * n_actions)) throw ConfigError("theta_star entry has wrong dimension");
}

EnvSpec make_env_spec(int d, int n_actions, int horizon, RewardFamily family, std::uint64_t seed) {
  EnvSpec spec;
  spec.d = d;
  spec.n_actions = n_actions;
  spec.horizon = horizon;
  spec.family = family;
  spec.seed = seed;
  Rng rng = make_rng(seed, {streams::kEnvParams});
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  spec.theta_star.resize(static_cast<std::size_t>(std::max(horizon, 0)));
  for (auto& t : spec.theta_star) {
    t.resize(static_cast<std::size_t>(std::max(d * n_actions, 0)));
    for (double& v : t) v = unif(rng);
  }
  spec.validate();
  return spec;
}

Vector feature_map(std::span<const double> x, int a, int d, int n_actions) {
  if (x.size() != static_cast<std::size_t>(d)) throw ConfigError("feature_map: state dimension mismatch");
  return block_feature(x, a, n_actions);
}

double acceptance_probability(std::span<const double> x, int a, std::span<const double> candidate) {
  const std::size_t d = x.size();
  if (candidate.size() != d) throw ConfigError("acceptance_probability: dimension mismatch");
  const double scale = a + 1.0;
  const double shift = static_cast<double>(a) / static_cast<double>(d);
  double numerator = 0.0;
  double candidate_sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    numerator += (x[i] * scale + shift) * std::exp(-candidate[i]);
    candidate_sum += candidate[i];
  }
  const double ratio = numerator / (candidate_sum * scale + a);
  if (!std::isfinite(ratio) || ratio < 0.0) return 0.0;
  return std::min(1.0, ratio);
}

Vector rejection_transition(std::span<const double> x, int a, int d, Rng& rng) {
  if (x.size() != static_cast<std::size_t>(d)) throw ConfigError("rejection_transition: state dimension mismatch");
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  Vector candidate(static_cast<std::size_t>(d));
  for (int attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
    for (double& v : candidate) v = unif(rng);
    const double alpha = acceptance_probability(x, a, candidate);
    if (uniform01(rng) < alpha) return candidate;
  }
  throw EnvironmentError("rejection sampler exceeded " + std::to_string(kMaxRejectionAttempts) + " attempts");
}

double sample_reward(const EnvSpec& spec, int h, std::span<const double> x, int a, Rng& rng) {
  const Vector phi = feature_map(x, a, spec.d, spec.n_actions);
  const double u = dot(phi, spec.theta_star.at(static_cast<std::size_t>(h)));
  switch (spec.family) {
    case RewardFamily::binomial: return std::bernoulli_distribution(sigmoid(u))(rng) ? 1.0 : 0.0;
    case RewardFamily::beta: {
      const double s = sigmoid(u);
      std::gamma_distribution<double> ga(s, 1.0);
      std::gamma_distribution<double> gb(1.0 - s, 1.0);
      for (;;) {
        const double x1 = ga(rng);
        const double x2 = gb(rng);
        const double r = x1 / (x1 + x2);
        // both draws can underflow to 0 for small shapes; keep the open interval
        if (r > 0.0 && r < 1.0) return r;
      }
    }
    case RewardFamily::gaussian:
      return std::normal_distribution<double>(u, std::sqrt(kGaussianRewardVariance))(rng);
  }
  return 0.0;
}

int behavior_policy_action(const Policy& reference, int h, std::span<const double> x, Rng& rng,
                           double reference_weight) {
  if (uniform01(rng) < reference_weight) return reference.sample_action(h, x, rng);
  return std::uniform_int_distribution<int>(0, reference.n_actions() - 1)(rng);
}

SyntheticEnv::SyntheticEnv(EnvSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

FeatureMapPair SyntheticEnv::features() const {
  return FeatureMapPair::same(block_feature_map(static_cast<std::size_t>(spec_.d), spec_.n_actions));
}

Vector SyntheticEnv::initial_state(Rng& rng) const {
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  Vector x(static_cast<std::size_t>(spec_.d));
  for (double& v : x) v = unif(rng);
  return x;
}

double SyntheticEnv::mean_reward(int h, std::span<const double> x, int a) const {
  const Vector phi = feature_map(x, a, spec_.d, spec_.n_actions);
  return link().eval(dot(phi, spec_.theta_star.at(static_cast<std::size_t>(h))));
}

double SyntheticEnv::sample_reward(int h, std::span<const double> x, int a, Rng& rng) const {
  return glmdp::sample_reward(spec_, h, x, a, rng);
}

Vector SyntheticEnv::sample_next_state(int, std::span<const double> x, int a, Rng& rng) const {
  return rejection_transition(x, a, spec_.d, rng);
}

TrajectoryDataset generate_episodes(const Environment& env, const Policy& behavior, std::size_t count,
                                    std::uint64_t seed) {
  TrajectoryDataset data(env.horizon(), env.n_actions(), env.state_dim());
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = make_rng(seed, {streams::kEpisode, i});
    Episode episode;
    episode.reserve(static_cast<std::size_t>(env.horizon()));
    Vector x = env.initial_state(rng);
    for (int h = 0; h < env.horizon(); ++h) {
      TrajectoryStep step;
      step.action = behavior.sample_action(h, x, rng);
      step.reward = env.sample_reward(h, x, step.action, rng);
      step.next_state = env.sample_next_state(h, x, step.action, rng);
      step.state = std::move(x);
      x = step.next_state;
      episode.push_back(std::move(step));
    }
    data.add(std::move(episode));
  }
  return data;
}

TrajectoryDataset generate_dataset(const Environment& env, const Policy& behavior, std::size_t n_labeled,
                                   std::size_t n_unlabeled, std::uint64_t seed) {
  const TrajectoryDataset full = generate_episodes(env, behavior, n_labeled + n_unlabeled, seed);
  TrajectoryDataset out = full.empty_like();
  for (std::size_t i = 0; i < full.size(); ++i) {
    Episode e = full[i];
    if (i >= n_labeled)
      for (auto& s : e) s.reward.reset();
    out.add(std::move(e));
  }
  return out;
}

std::shared_ptr<const PessimisticPolicy> fit_reference_policy(const SyntheticEnv& env, std::size_t pilot_episodes,
                                                              std::uint64_t seed) {
  const UniformPolicy uniform(env.n_actions());
  const TrajectoryDataset pilot = generate_episodes(env, uniform, pilot_episodes, derive_seed(seed, {streams::kPilot}));
  GpeviConfig config;
  config.c_r = 0.0;
  config.c_p = 0.0;
  config.link = env.link();
  config.features = env.features();
  return std::make_shared<const PessimisticPolicy>(solve_gpevi(pilot, config).policy);
}

}  // namespace glmdp
