#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "glmdp/envs.hpp"

namespace glmdp {

inline constexpr int kConfigSchemaVersion = 1;

// Resolved experiment configuration. Text form is one `key = value` per line,
// '#' starts a comment, lists are comma separated. Every key has a default.
struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;

  // environment
  RewardFamily family = RewardFamily::binomial;
  int d = 8;
  int n_actions = 2;
  int horizon = 5;
  double param_norm_bound = 0.0;  // 0: 0.5 * sqrt(d * n_actions), the largest possible |theta*|

  // data
  std::size_t n_labeled = 1000;
  std::size_t n_unlabeled = 0;
  std::size_t test_size = 250;
  std::size_t pilot_episodes = kDefaultPilotEpisodes;

  // methods and solver settings
  std::vector<std::string> methods{"gpevi", "lpevi", "single_q", "global_q"};
  double lambda = 1.0;
  double xi = 0.01;
  std::vector<double> c_grid{0.005, 0.001, 0.0005, 0.0001};
  int cv_folds = 5;
  int fqi_sweeps = 50;

  // evaluation
  double target_softening = 0.0;  // epsilon-softened OPE targets when > 0
  std::size_t mc_rollouts = 0;    // SubOpt against the reference policy when > 0

  // run
  int reps = 20;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out = "results";

  // sweep axes, used by `sweep` only (an empty list keeps the scalar value above)
  std::vector<double> labeled_ratios;  // over n_labeled + n_unlabeled episodes; replaces n_values when set
  std::vector<std::size_t> n_values{1000, 1500, 2000, 2500};
  std::vector<int> d_values{8, 10, 12};
  std::vector<int> action_values{2, 3, 4};

  double resolved_norm_bound() const;
  void validate() const;

  // Ordered (key, value) pairs covering every field.
  std::vector<std::pair<std::string, std::string>> to_key_values() const;
  std::string to_text() const;
};

const std::vector<std::string>& known_methods();

// Applies `key = value` lines on top of defaults. Throws ConfigError.
ExperimentConfig parse_config_text(const std::string& text);

// Accepts the text format or a manifest JSON written by a previous run.
ExperimentConfig load_config(const std::string& path);

void apply_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);

}  // namespace glmdp
