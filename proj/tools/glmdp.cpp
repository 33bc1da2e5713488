// glmdp: generate datasets, run experiments, aggregate results.
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "glmdp/config.hpp"
#include "glmdp/errors.hpp"
#include "glmdp/experiment.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> methods;
  std::optional<int> reps;
  std::optional<int> workers;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "config file (key = value text, or a manifest.json)");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--methods", o.methods, "comma-separated method list");
  cmd->add_option("--reps", o.reps, "replication count");
  cmd->add_option("--workers", o.workers, "worker threads");
}

glmdp::ExperimentConfig resolve(const Overrides& o) {
  glmdp::ExperimentConfig config;
  if (!o.config_path.empty()) config = glmdp::load_config(o.config_path);
  if (o.seed) config.seed = *o.seed;
  if (o.out) config.out = *o.out;
  if (o.methods) glmdp::apply_config_value(config, "methods", *o.methods);
  if (o.reps) config.reps = *o.reps;
  if (o.workers) config.workers = *o.workers;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pessimistic offline RL for generalized linear MDPs"};
  app.require_subcommand(1);

  Overrides gen_o, run_o, sweep_o;
  std::string report_dir = "results";
  auto* gen = app.add_subcommand("generate", "write train/test CSVs and a manifest");
  add_common(gen, gen_o);
  auto* run = app.add_subcommand("run", "train, select c and score every method on each replication");
  add_common(run, run_o);
  auto* sweep = app.add_subcommand("sweep", "run over the configured sweep grid");
  add_common(sweep, sweep_o);
  auto* report = app.add_subcommand("report", "aggregate results.jsonl into plot-data CSVs");
  report->add_option("--out,dir", report_dir, "results directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return glmdp::cmd_generate(resolve(gen_o), std::cerr);
    if (*run) return glmdp::cmd_run(resolve(run_o), std::cerr);
    if (*sweep) return glmdp::cmd_sweep(resolve(sweep_o), std::cerr);
    if (*report) {
      glmdp::cmd_report(report_dir, std::cerr);
      return 0;
    }
  } catch (const glmdp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const glmdp::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const glmdp::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
