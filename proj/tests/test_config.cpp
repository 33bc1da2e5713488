#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "glmdp/config.hpp"
#include "glmdp/errors.hpp"
#include "json.hpp"

using namespace glmdp;

TEST_CASE("defaults survive a text round trip") {
  const ExperimentConfig defaults;
  const ExperimentConfig parsed = parse_config_text(defaults.to_text());
  CHECK(parsed.to_text() == defaults.to_text());
  CHECK(defaults.resolved_norm_bound() == doctest::Approx(0.5 * std::sqrt(16.0)));
}

TEST_CASE("parsing keys, lists and comments") {
  const ExperimentConfig c = parse_config_text(R"(
# a comment line
schema_version = 1
env.family = gaussian   # trailing comment
env.d = 4
env.n_actions=3
methods = gpevi, ssgpevi
solver.c_grid = 0.5, 0.25
sweep.labeled_ratios = 0.1,0.5
run.seed = 18446744073709551615
)");
  CHECK(c.family == RewardFamily::gaussian);
  CHECK(c.d == 4);
  CHECK(c.n_actions == 3);
  CHECK(c.methods == std::vector<std::string>{"gpevi", "ssgpevi"});
  CHECK(c.c_grid == std::vector<double>{0.5, 0.25});
  CHECK(c.labeled_ratios == std::vector<double>{0.1, 0.5});
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK(c.horizon == 5);
}

TEST_CASE("bad configurations are rejected") {
  CHECK_THROWS_AS(parse_config_text("env.d = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("schema_version = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("schema_version = 1\nenv.dd = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("schema_version = 1\nenv.d = four\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("schema_version = 1\nenv.d = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("schema_version = 1\nenv.family = poisson\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("schema_version = 1\nmethods = gpevi, magic\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("schema_version = 1\nsolver.xi = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("schema_version = 1\nsolver.c_grid = \n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("schema_version = 1\nsolver.c_grid = 0.1, -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("schema_version = 1\ndata.n_labeled = -5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("schema_version = 1\nrun.seed = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("schema_version = 1\nsweep.labeled_ratios = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("schema_version = 1\njust words\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.txt"), ConfigError);
}

TEST_CASE("configs load from text files and from manifests") {
  const auto dir = std::filesystem::temp_directory_path() / "glmdp_config_test";
  std::filesystem::create_directories(dir);
  ExperimentConfig c;
  c.d = 6;
  c.methods = {"lpevi"};
  {
    std::ofstream(dir / "c.txt") << c.to_text();
  }
  CHECK(load_config((dir / "c.txt").string()).to_text() == c.to_text());

  nlohmann::ordered_json manifest;
  manifest["schema_version"] = 1;
  for (const auto& [k, v] : c.to_key_values()) manifest["config"][k] = v;
  {
    std::ofstream(dir / "manifest.json") << manifest.dump(2);
  }
  CHECK(load_config((dir / "manifest.json").string()).to_text() == c.to_text());

  {
    std::ofstream(dir / "broken.json") << "{ not json";
  }
  CHECK_THROWS_AS(load_config((dir / "broken.json").string()), ConfigError);
  std::filesystem::remove_all(dir);
}
