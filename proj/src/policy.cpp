#include "glmdp/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glmdp/errors.hpp"

namespace glmdp {

int Policy::sample_action(int h, std::span<const double> x, Rng& rng) const {
  const int n = n_actions();
  std::vector<double> p(static_cast<std::size_t>(n));
  action_probabilities(h, x, p);
  const double u = uniform01(rng);
  double acc = 0.0;
  for (int a = 0; a < n; ++a) {
    acc += p[static_cast<std::size_t>(a)];
    if (u < acc) return a;
  }
  // u landed in rounding slack above the cumulative sum
  for (int a = n - 1; a >= 0; --a)
    if (p[static_cast<std::size_t>(a)] > 0.0) return a;
  return 0;
}

double Policy::probability(int h, std::span<const double> x, int a) const {
  std::vector<double> p(static_cast<std::size_t>(n_actions()));
  action_probabilities(h, x, p);
  return p.at(static_cast<std::size_t>(a));
}

int argmax_lowest(std::span<const double> values) {
  if (values.empty()) throw ConfigError("argmax over an empty action set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return static_cast<int>(best);
}

void GreedyPolicy::action_probabilities(int h, std::span<const double> x, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  out[static_cast<std::size_t>(greedy_action(h, x))] = 1.0;
}

int GreedyPolicy::sample_action(int h, std::span<const double> x, Rng&) const { return greedy_action(h, x); }

void UniformPolicy::action_probabilities(int, std::span<const double>, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 1.0 / n_actions_);
}

MixturePolicy::MixturePolicy(std::shared_ptr<const Policy> reference, double reference_weight)
    : reference_(std::move(reference)), weight_(reference_weight) {
  if (!reference_) throw ConfigError("mixture policy needs a reference policy");
  if (!(weight_ >= 0.0 && weight_ <= 1.0)) throw ConfigError("mixture weight must lie in [0, 1]");
}

void MixturePolicy::action_probabilities(int h, std::span<const double> x, std::span<double> out) const {
  reference_->action_probabilities(h, x, out);
  const double floor = (1.0 - weight_) / static_cast<double>(out.size());
  for (double& p : out) p = weight_ * p + floor;
}

int MixturePolicy::sample_action(int h, std::span<const double> x, Rng& rng) const {
  if (uniform01(rng) < weight_) return reference_->sample_action(h, x, rng);
  return std::uniform_int_distribution<int>(0, n_actions() - 1)(rng);
}

SoftenedPolicy::SoftenedPolicy(std::shared_ptr<const Policy> base, double epsilon)
    : base_(std::move(base)), epsilon_(epsilon) {
  if (!base_) throw ConfigError("softened policy needs a base policy");
  if (!(epsilon_ >= 0.0 && epsilon_ <= 1.0)) throw ConfigError("softening epsilon must lie in [0, 1]");
}

void SoftenedPolicy::action_probabilities(int h, std::span<const double> x, std::span<double> out) const {
  base_->action_probabilities(h, x, out);
  const double floor = epsilon_ / static_cast<double>(out.size());
  for (double& p : out) p = (1.0 - epsilon_) * p + floor;
}

void RewardRange::validate() const {
  if (!std::isfinite(g_min) || !std::isfinite(g_max) || !(g_max > g_min)) {
    throw ConfigError("reward range requires finite g_max > g_min");
  }
}

PessimisticPolicy::PessimisticPolicy(int horizon, int n_actions, LinkFunction link, FeatureMapPair features,
                                     std::optional<RewardRange> normalization)
    : horizon_(horizon),
      n_actions_(n_actions),
      link_(std::move(link)),
      features_(std::move(features)),
      normalization_(normalization),
      steps_(static_cast<std::size_t>(std::max(horizon, 0))) {
  if (horizon <= 0) throw ConfigError("policy horizon must be positive");
  if (n_actions <= 0) throw ConfigError("empty action set");
  if (normalization_) normalization_->validate();
}

void PessimisticPolicy::check_step(int h) const {
  if (h < 0 || h >= horizon_) throw ConfigError("step index " + std::to_string(h) + " outside [0, H)");
  if (!steps_[static_cast<std::size_t>(h)].fitted) throw ConfigError("step " + std::to_string(h) + " not fitted");
}

const PessimisticStep& PessimisticPolicy::step(int h) const {
  if (h < 0 || h >= horizon_) throw ConfigError("step index " + std::to_string(h) + " outside [0, H)");
  return steps_[static_cast<std::size_t>(h)];
}

void PessimisticPolicy::set_step(int h, PessimisticStep step) {
  if (h < 0 || h >= horizon_) throw ConfigError("step index " + std::to_string(h) + " outside [0, H)");
  if (step.theta.size() != features_.reward.dim() || step.beta.size() != features_.transition.dim() ||
      step.reward_factor.dim() != features_.reward.dim() ||
      step.transition_factor.dim() != features_.transition.dim()) {
    throw ConfigError("step parameters do not match feature dimensions");
  }
  step.fitted = true;
  steps_[static_cast<std::size_t>(h)] = std::move(step);
}

PessimisticPolicy::Parts PessimisticPolicy::parts(int h, std::span<const double> x, int a) const {
  check_step(h);
  if (a < 0 || a >= n_actions_) throw ConfigError("action index out of range");
  const PessimisticStep& s = steps_[static_cast<std::size_t>(h)];
  const Vector phi_r = features_.reward(x, a);
  const Vector phi_p = features_.transition(x, a);

  const double u = dot(phi_r, s.theta);
  double mean = link_.eval(u);
  if (normalization_) mean = (mean - normalization_->g_min) / normalization_->width();

  Parts out{mean, dot(phi_p, s.beta), {}};
  if (s.alpha_r != 0.0) {
    const double slope = link_.deriv(u);
    out.gamma.reward = s.alpha_r * std::sqrt(slope * slope * s.reward_factor.inverse_quad_form(phi_r));
  }
  if (s.alpha_p != 0.0) {
    out.gamma.transition = s.alpha_p * std::sqrt(s.transition_factor.inverse_quad_form(phi_p));
  }
  return out;
}

double PessimisticPolicy::bellman_estimate(int h, std::span<const double> x, int a) const {
  const Parts p = parts(h, x, a);
  return p.mean_reward + p.transition;
}

GammaParts PessimisticPolicy::compute_gamma(int h, std::span<const double> x, int a) const {
  return parts(h, x, a).gamma;
}

double PessimisticPolicy::total_gamma(int h, std::span<const double> x, int a) const {
  const GammaParts g = compute_gamma(h, x, a);
  return normalization_ ? g.total() / normalization_->width() : g.total();
}

double PessimisticPolicy::evaluate_q(int h, std::span<const double> x, int a) const {
  const Parts p = parts(h, x, a);
  const double gamma = normalization_ ? p.gamma.total() / normalization_->width() : p.gamma.total();
  const double ceiling = static_cast<double>(horizon_ - h);
  const double capped = std::min(p.mean_reward + p.transition - gamma, ceiling);
  return std::max(capped, 0.0);
}

void PessimisticPolicy::q_values(int h, std::span<const double> x, std::span<double> out) const {
  if (out.size() != static_cast<std::size_t>(n_actions_)) throw ConfigError("q_values: buffer size mismatch");
  for (int a = 0; a < n_actions_; ++a) out[static_cast<std::size_t>(a)] = evaluate_q(h, x, a);
}

double PessimisticPolicy::value(int h, std::span<const double> x) const {
  std::vector<double> q(static_cast<std::size_t>(n_actions_));
  q_values(h, x, q);
  return *std::max_element(q.begin(), q.end());
}

int PessimisticPolicy::greedy_action(int h, std::span<const double> x) const {
  std::vector<double> q(static_cast<std::size_t>(n_actions_));
  q_values(h, x, q);
  return argmax_lowest(q);
}

bool PessimisticPolicy::same_parameters(const PessimisticPolicy& other) const {
  return horizon_ == other.horizon_ && n_actions_ == other.n_actions_ && normalization_ == other.normalization_ &&
         steps_ == other.steps_;
}

double evaluate_q(const PessimisticPolicy& policy, int h, std::span<const double> x, int a) {
  return policy.evaluate_q(h, x, a);
}

int greedy_action(const PessimisticPolicy& policy, int h, std::span<const double> x) {
  return policy.greedy_action(h, x);
}

}  // namespace glmdp
