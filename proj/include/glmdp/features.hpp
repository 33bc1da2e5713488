#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "glmdp/linalg.hpp"

namespace glmdp {

// A feature map (x, a) -> R^dim written into a caller-provided buffer.
class FeatureMap {
 public:
  using Fn = std::function<void(std::span<const double> x, int a, std::span<double> out)>;

  FeatureMap() = default;
  FeatureMap(std::size_t dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}

  std::size_t dim() const { return dim_; }
  void eval(std::span<const double> x, int a, std::span<double> out) const;
  Vector operator()(std::span<const double> x, int a) const;

  // A zero-dimensional map (used to switch a reward component off).
  static FeatureMap none();

 private:
  std::size_t dim_ = 0;
  Fn fn_;
};

struct FeatureMapPair {
  FeatureMap reward;      // phi_r
  FeatureMap transition;  // phi_p

  static FeatureMapPair same(const FeatureMap& phi) { return {phi, phi}; }
};

// Normalizes x to unit L2 norm and places it in block `a` of a
// (d * n_actions)-vector. x = 0 maps to the zero vector.
void block_feature(std::span<const double> x, int a, int n_actions, std::span<double> out);
Vector block_feature(std::span<const double> x, int a, int n_actions);

FeatureMap block_feature_map(std::size_t state_dim, int n_actions);

// One-hot features of dimension n_states * n_actions for tabular states,
// where the state vector holds the state index in its single coordinate.
FeatureMap one_hot_map(std::size_t n_states, int n_actions);

}  // namespace glmdp
