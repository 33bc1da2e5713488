#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "glmdp/config.hpp"
#include "glmdp/dataset.hpp"
#include "glmdp/envs.hpp"
#include "glmdp/policy.hpp"

namespace glmdp {

// One method on one replication of one sweep cell.
struct RunRecord {
  std::string method;
  int rep = 0;
  std::uint64_t seed = 0;
  std::string axis = "n";  // "n" or "ratio": which report table the cell feeds
  RewardFamily family = RewardFamily::binomial;
  int d = 0;
  int n_actions = 0;
  int horizon = 0;
  std::size_t n_labeled = 0;
  std::size_t n_unlabeled = 0;
  double labeled_ratio = 1.0;
  std::optional<double> c;  // selected bonus constant, if the method has one
  double value = 0.0;       // step-IS estimate on the test set
  double std_error = 0.0;
  std::optional<double> subopt;
  double train_seconds = 0.0;
  bool ok = true;
  std::string error;

  std::string to_json_line() const;
  static std::optional<RunRecord> from_json_line(const std::string& line);
};

struct Cell {
  ExperimentConfig config;
  std::string axis = "n";
};

// Everything a replication needs, regenerated from the replication seed.
struct Replication {
  std::uint64_t seed = 0;
  std::shared_ptr<const SyntheticEnv> env;
  std::shared_ptr<const PessimisticPolicy> reference;
  std::shared_ptr<const MixturePolicy> behavior;
  TrajectoryDataset full_train;  // n + N labeled episodes
  TrajectoryDataset labeled;     // first n
  TrajectoryDataset unlabeled;   // last N, rewards stripped
  TrajectoryDataset test;
};

Replication make_replication(const ExperimentConfig& config, std::uint64_t rep_seed);

// Trains, cross-validates and scores one method. Failures are captured in the record.
RunRecord run_method(const ExperimentConfig& config, const Replication& rep, const std::string& method,
                     std::optional<double> reference_value);

// All methods x replications of all cells, sorted by (cell, method, rep).
std::vector<RunRecord> run_cells(const std::vector<Cell>& cells, int workers, std::ostream* log = nullptr);

// Sweep expansion: d_values x action_values x (labeled_ratios or n_values).
std::vector<Cell> expand_sweep(const ExperimentConfig& config);

int cmd_generate(const ExperimentConfig& config, std::ostream& log);
int cmd_run(const ExperimentConfig& config, std::ostream& log);
int cmd_sweep(const ExperimentConfig& config, std::ostream& log);

struct ReportResult {
  std::size_t records = 0;
  std::size_t warnings = 0;  // missing files plus unreadable lines
};
ReportResult cmd_report(const std::string& results_dir, std::ostream& log);

// Writes the per-cell summary CSV (one row per cell x method).
void write_summary_csv(std::ostream& out, const std::vector<RunRecord>& records);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace glmdp
