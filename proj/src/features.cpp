#include "glmdp/features.hpp"

#include <algorithm>
#include <cmath>

#include "glmdp/errors.hpp"

namespace glmdp {

void FeatureMap::eval(std::span<const double> x, int a, std::span<double> out) const {
  if (out.size() != dim_) throw ConfigError("feature map: output buffer has wrong dimension");
  if (dim_ == 0) return;
  fn_(x, a, out);
}

Vector FeatureMap::operator()(std::span<const double> x, int a) const {
  Vector out(dim_);
  eval(x, a, out);
  return out;
}

FeatureMap FeatureMap::none() {
  return FeatureMap(0, [](std::span<const double>, int, std::span<double>) {});
}

void block_feature(std::span<const double> x, int a, int n_actions, std::span<double> out) {
  const std::size_t d = x.size();
  if (out.size() != d * static_cast<std::size_t>(n_actions)) {
    throw ConfigError("block feature: state dimension does not match feature dimension");
  }
  if (a < 0 || a >= n_actions) throw ConfigError("block feature: action out of range");
  std::fill(out.begin(), out.end(), 0.0);
  double sq = 0.0;
  for (double v : x) sq += v * v;
  if (sq == 0.0) return;
  const double inv = 1.0 / std::sqrt(sq);
  double* block = out.data() + static_cast<std::size_t>(a) * d;
  for (std::size_t i = 0; i < d; ++i) block[i] = x[i] * inv;
}

Vector block_feature(std::span<const double> x, int a, int n_actions) {
  Vector out(x.size() * static_cast<std::size_t>(n_actions));
  block_feature(x, a, n_actions, out);
  return out;
}

FeatureMap block_feature_map(std::size_t state_dim, int n_actions) {
  return FeatureMap(state_dim * static_cast<std::size_t>(n_actions),
                    [state_dim, n_actions](std::span<const double> x, int a, std::span<double> out) {
                      if (x.size() != state_dim) throw ConfigError("feature map: state dimension mismatch");
                      block_feature(x, a, n_actions, out);
                    });
}

FeatureMap one_hot_map(std::size_t n_states, int n_actions) {
  return FeatureMap(n_states * static_cast<std::size_t>(n_actions),
                    [n_states, n_actions](std::span<const double> x, int a, std::span<double> out) {
                      if (x.size() != 1) throw ConfigError("one-hot map: tabular states are 1-dimensional");
                      const auto s = static_cast<std::size_t>(x[0]);
                      if (s >= n_states || a < 0 || a >= n_actions) throw ConfigError("one-hot map: index out of range");
                      std::fill(out.begin(), out.end(), 0.0);
                      out[s * static_cast<std::size_t>(n_actions) + static_cast<std::size_t>(a)] = 1.0;
                    });
}

}  // namespace glmdp
