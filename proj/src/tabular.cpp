#include "glmdp/tabular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "glmdp/errors.hpp"

namespace glmdp {

void TabularEnvSpec::validate() const {
  if (n_states <= 0 || n_actions <= 0 || horizon <= 0) throw ConfigError("tabular spec dimensions must be positive");
  const std::size_t rows = static_cast<std::size_t>(horizon) * n_states * n_actions;
  if (transition.size() != rows * static_cast<std::size_t>(n_states)) throw ConfigError("transition table has wrong size");
  if (theta_star.size() != static_cast<std::size_t>(horizon)) throw ConfigError("theta_star needs one entry per step");
  for (const auto& t : theta_star)
    if (t.size() != feature_dim()) throw ConfigError("theta_star entry has wrong dimension");
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (int k = 0; k < n_states; ++k) {
      const double v = transition[r * n_states + k];
      if (!(v >= 0.0)) throw ConfigError("transition probabilities must be nonnegative");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ConfigError("transition row is not stochastic");
  }
}

TabularEnvSpec random_tabular_spec(int n_states, int n_actions, int horizon, std::uint64_t seed) {
  TabularEnvSpec spec;
  spec.n_states = n_states;
  spec.n_actions = n_actions;
  spec.horizon = horizon;
  Rng rng = make_rng(seed, {streams::kEnvParams});
  std::exponential_distribution<double> expo(1.0);
  const std::size_t rows = static_cast<std::size_t>(horizon) * n_states * n_actions;
  spec.transition.resize(rows * n_states);
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (int k = 0; k < n_states; ++k) sum += spec.transition[r * n_states + k] = expo(rng);
    for (int k = 0; k < n_states; ++k) spec.transition[r * n_states + k] /= sum;
  }
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  spec.theta_star.assign(static_cast<std::size_t>(horizon), Vector(spec.feature_dim()));
  for (auto& t : spec.theta_star)
    for (double& v : t) v = unif(rng);
  spec.validate();
  return spec;
}

FeatureMapPair tabular_features(const TabularEnvSpec& spec) {
  return FeatureMapPair::same(one_hot_map(static_cast<std::size_t>(spec.n_states), spec.n_actions));
}

TabularEnv::TabularEnv(TabularEnvSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

Vector TabularEnv::initial_state(Rng& rng) const {
  return {static_cast<double>(std::uniform_int_distribution<int>(0, spec_.n_states - 1)(rng))};
}

double TabularEnv::mean_reward(int h, int x, int a) const {
  return sigmoid(spec_.theta_star.at(static_cast<std::size_t>(h))[static_cast<std::size_t>(x) * spec_.n_actions + a]);
}

double TabularEnv::mean_reward(int h, std::span<const double> x, int a) const {
  return mean_reward(h, state_index(x), a);
}

double TabularEnv::sample_reward(int h, std::span<const double> x, int a, Rng& rng) const {
  return std::bernoulli_distribution(mean_reward(h, x, a))(rng) ? 1.0 : 0.0;
}

Vector TabularEnv::sample_next_state(int h, std::span<const double> x, int a, Rng& rng) const {
  const int s = state_index(x);
  const double u = uniform01(rng);
  double acc = 0.0;
  for (int k = 0; k < spec_.n_states; ++k) {
    acc += spec_.p(h, s, a, k);
    if (u < acc) return {static_cast<double>(k)};
  }
  for (int k = spec_.n_states - 1; k >= 0; --k)
    if (spec_.p(h, s, a, k) > 0.0) return {static_cast<double>(k)};
  return {0.0};
}

TabularPolicy::TabularPolicy(int n_states, int n_actions, int horizon, std::vector<double> probabilities)
    : n_states_(n_states), n_actions_(n_actions), horizon_(horizon), probabilities_(std::move(probabilities)) {
  if (probabilities_.size() != static_cast<std::size_t>(horizon) * n_states * n_actions) {
    throw ConfigError("tabular policy table has wrong size");
  }
}

TabularPolicy TabularPolicy::deterministic(int n_states, int n_actions, int horizon, const std::vector<int>& actions) {
  std::vector<double> table(static_cast<std::size_t>(horizon) * n_states * n_actions, 0.0);
  for (std::size_t i = 0; i < actions.size(); ++i) table[i * n_actions + actions[i]] = 1.0;
  return TabularPolicy(n_states, n_actions, horizon, std::move(table));
}

void TabularPolicy::action_probabilities(int h, std::span<const double> x, std::span<double> out) const {
  const std::size_t base = (static_cast<std::size_t>(h) * n_states_ + state_index(x)) * n_actions_;
  std::copy_n(probabilities_.begin() + static_cast<std::ptrdiff_t>(base), n_actions_, out.begin());
}

double DpSolution::initial_value() const {
  const Vector& v = value.front();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<int> DpSolution::flat_policy() const {
  std::vector<int> flat;
  for (const auto& row : policy) flat.insert(flat.end(), row.begin(), row.end());
  return flat;
}

namespace {

double continuation(const TabularEnvSpec& spec, int h, int x, int a, const Vector& next_value) {
  double c = 0.0;
  for (int k = 0; k < spec.n_states; ++k) c += spec.p(h, x, a, k) * next_value[static_cast<std::size_t>(k)];
  return c;
}

}  // namespace

DpSolution exact_dp(const TabularEnvSpec& spec) {
  spec.validate();
  const int S = spec.n_states, A = spec.n_actions, H = spec.horizon;
  TabularEnv env(spec);
  DpSolution dp;
  dp.value.assign(static_cast<std::size_t>(H) + 1, Vector(static_cast<std::size_t>(S), 0.0));
  dp.q.assign(static_cast<std::size_t>(H), Vector(spec.feature_dim(), 0.0));
  dp.policy.assign(static_cast<std::size_t>(H), std::vector<int>(static_cast<std::size_t>(S), 0));
  for (int h = H - 1; h >= 0; --h) {
    const auto hs = static_cast<std::size_t>(h);
    for (int x = 0; x < S; ++x) {
      const std::size_t base = static_cast<std::size_t>(x) * A;
      for (int a = 0; a < A; ++a) {
        dp.q[hs][base + a] = env.mean_reward(h, x, a) + continuation(spec, h, x, a, dp.value[hs + 1]);
      }
      const int best = argmax_lowest(std::span<const double>(dp.q[hs]).subspan(base, A));
      dp.policy[hs][static_cast<std::size_t>(x)] = best;
      dp.value[hs][static_cast<std::size_t>(x)] = dp.q[hs][base + best];
    }
  }
  return dp;
}

DpSolution evaluate_policy_exact(const TabularEnvSpec& spec, const Policy& policy) {
  spec.validate();
  const int S = spec.n_states, A = spec.n_actions, H = spec.horizon;
  TabularEnv env(spec);
  DpSolution dp;
  dp.value.assign(static_cast<std::size_t>(H) + 1, Vector(static_cast<std::size_t>(S), 0.0));
  dp.q.assign(static_cast<std::size_t>(H), Vector(spec.feature_dim(), 0.0));
  dp.policy.assign(static_cast<std::size_t>(H), std::vector<int>(static_cast<std::size_t>(S), 0));
  std::vector<double> probs(static_cast<std::size_t>(A));
  for (int h = H - 1; h >= 0; --h) {
    const auto hs = static_cast<std::size_t>(h);
    for (int x = 0; x < S; ++x) {
      const std::size_t base = static_cast<std::size_t>(x) * A;
      const Vector state{static_cast<double>(x)};
      policy.action_probabilities(h, state, probs);
      double v = 0.0;
      for (int a = 0; a < A; ++a) {
        const double q = env.mean_reward(h, x, a) + continuation(spec, h, x, a, dp.value[hs + 1]);
        dp.q[hs][base + a] = q;
        v += probs[static_cast<std::size_t>(a)] * q;
      }
      dp.value[hs][static_cast<std::size_t>(x)] = v;
      dp.policy[hs][static_cast<std::size_t>(x)] = argmax_lowest(probs);
    }
  }
  return dp;
}

std::vector<Vector> transition_coefficients(const TabularEnvSpec& spec, const DpSolution& dp) {
  const int S = spec.n_states, A = spec.n_actions, H = spec.horizon;
  std::vector<Vector> beta(static_cast<std::size_t>(H), Vector(spec.feature_dim(), 0.0));
  for (int h = 0; h < H; ++h) {
    const auto hs = static_cast<std::size_t>(h);
    for (int next = 0; next < S; ++next) {
      // mu_h(next) has entry P[h][x][a][next] at coordinate x * A + a
      const double v = dp.value[hs + 1][static_cast<std::size_t>(next)];
      for (int x = 0; x < S; ++x)
        for (int a = 0; a < A; ++a) beta[hs][static_cast<std::size_t>(x) * A + a] += v * spec.p(h, x, a, next);
    }
  }
  return beta;
}

double bellman_completeness_residual(const TabularEnvSpec& spec, const DpSolution& dp) {
  const std::vector<Vector> beta = transition_coefficients(spec, dp);
  const FeatureMapPair features = tabular_features(spec);
  double worst = 0.0;
  for (int h = 0; h < spec.horizon; ++h) {
    const auto hs = static_cast<std::size_t>(h);
    for (int x = 0; x < spec.n_states; ++x) {
      const Vector state{static_cast<double>(x)};
      for (int a = 0; a < spec.n_actions; ++a) {
        const Vector phi_r = features.reward(state, a);
        const Vector phi_p = features.transition(state, a);
        const double model = sigmoid(dot(phi_r, spec.theta_star[hs])) + dot(phi_p, beta[hs]);
        worst = std::max(worst, std::abs(dp.q[hs][static_cast<std::size_t>(x) * spec.n_actions + a] - model));
      }
    }
  }
  return worst;
}

}  // namespace glmdp
