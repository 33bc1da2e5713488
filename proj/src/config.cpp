#include "glmdp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "glmdp/dataset.hpp"
#include "glmdp/errors.hpp"
#include "json.hpp"

namespace glmdp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a real number, got '" + v + "'");
  }
}

long long to_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

std::size_t to_count(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < 0) throw ConfigError(key + ": must be nonnegative");
  return static_cast<std::size_t>(x);
}

std::uint64_t to_seed(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size() || (!v.empty() && v[0] == '-')) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
  }
}

template <class T, class F>
std::vector<T> parse_list(const std::string& key, const std::string& value, F convert) {
  std::vector<T> out;
  for (const auto& item : split_list(value)) out.push_back(static_cast<T>(convert(key, item)));
  return out;
}

template <class T>
std::string join(const std::vector<T>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_same_v<T, double>) {
      out += format_real(items[i]);
    } else if constexpr (std::is_same_v<T, std::string>) {
      out += items[i];
    } else {
      out += std::to_string(items[i]);
    }
  }
  return out;
}

}  // namespace

const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> methods{"gpevi",  "ssgpevi",          "gpevi_full",       "lpevi",
                                                "single_q", "global_q",       "gpevi_unbounded", "ssgpevi_unbounded"};
  return methods;
}

double ExperimentConfig::resolved_norm_bound() const {
  return param_norm_bound > 0.0 ? param_norm_bound : 0.5 * std::sqrt(static_cast<double>(d) * n_actions);
}

void ExperimentConfig::validate() const {
  if (schema_version != kConfigSchemaVersion) {
    throw ConfigError("unsupported schema_version " + std::to_string(schema_version));
  }
  if (d <= 0 || n_actions <= 0 || horizon <= 0) throw ConfigError("env.d, env.n_actions and env.horizon must be positive");
  if (!(lambda > 0.0)) throw ConfigError("solver.lambda must be positive");
  if (!(xi > 0.0 && xi < 1.0)) throw ConfigError("solver.xi must lie in (0, 1)");
  if (c_grid.empty()) throw ConfigError("solver.c_grid must not be empty");
  for (double c : c_grid)
    if (!(c >= 0.0)) throw ConfigError("solver.c_grid entries must be nonnegative");
  if (cv_folds < 2) throw ConfigError("solver.cv_folds must be at least 2");
  if (fqi_sweeps < 1) throw ConfigError("solver.fqi_sweeps must be at least 1");
  if (!(target_softening >= 0.0 && target_softening < 1.0)) throw ConfigError("eval.target_softening must lie in [0, 1)");
  if (pilot_episodes < 1) throw ConfigError("data.pilot_episodes must be at least 1");
  if (reps < 1) throw ConfigError("run.reps must be at least 1");
  if (workers < 1) throw ConfigError("run.workers must be at least 1");
  if (methods.empty()) throw ConfigError("methods must not be empty");
  for (const auto& m : methods) {
    if (std::find(known_methods().begin(), known_methods().end(), m) == known_methods().end()) {
      throw ConfigError("unknown method '" + m + "'");
    }
  }
  for (double r : labeled_ratios)
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError("sweep.labeled_ratios entries must lie in (0, 1]");
  for (int v : d_values)
    if (v <= 0) throw ConfigError("sweep.d_values entries must be positive");
  for (int v : action_values)
    if (v <= 0) throw ConfigError("sweep.action_values entries must be positive");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::to_key_values() const {
  return {
      {"schema_version", std::to_string(schema_version)},
      {"env.family", to_string(family)},
      {"env.d", std::to_string(d)},
      {"env.n_actions", std::to_string(n_actions)},
      {"env.horizon", std::to_string(horizon)},
      {"env.param_norm_bound", format_real(param_norm_bound)},
      {"data.n_labeled", std::to_string(n_labeled)},
      {"data.n_unlabeled", std::to_string(n_unlabeled)},
      {"data.test_size", std::to_string(test_size)},
      {"data.pilot_episodes", std::to_string(pilot_episodes)},
      {"methods", join(methods)},
      {"solver.lambda", format_real(lambda)},
      {"solver.xi", format_real(xi)},
      {"solver.c_grid", join(c_grid)},
      {"solver.cv_folds", std::to_string(cv_folds)},
      {"solver.fqi_sweeps", std::to_string(fqi_sweeps)},
      {"eval.target_softening", format_real(target_softening)},
      {"eval.mc_rollouts", std::to_string(mc_rollouts)},
      {"run.reps", std::to_string(reps)},
      {"run.seed", std::to_string(seed)},
      {"run.workers", std::to_string(workers)},
      {"run.out", out},
      {"sweep.labeled_ratios", join(labeled_ratios)},
      {"sweep.n_values", join(n_values)},
      {"sweep.d_values", join(d_values)},
      {"sweep.action_values", join(action_values)},
  };
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : to_key_values()) out += k + " = " + v + "\n";
  return out;
}

void apply_config_value(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "schema_version") c.schema_version = static_cast<int>(to_integer(key, value));
  else if (key == "env.family") c.family = reward_family_from_name(value);
  else if (key == "env.d") c.d = static_cast<int>(to_integer(key, value));
  else if (key == "env.n_actions") c.n_actions = static_cast<int>(to_integer(key, value));
  else if (key == "env.horizon") c.horizon = static_cast<int>(to_integer(key, value));
  else if (key == "env.param_norm_bound") c.param_norm_bound = to_real(key, value);
  else if (key == "data.n_labeled") c.n_labeled = to_count(key, value);
  else if (key == "data.n_unlabeled") c.n_unlabeled = to_count(key, value);
  else if (key == "data.test_size") c.test_size = to_count(key, value);
  else if (key == "data.pilot_episodes") c.pilot_episodes = to_count(key, value);
  else if (key == "methods") c.methods = split_list(value);
  else if (key == "solver.lambda") c.lambda = to_real(key, value);
  else if (key == "solver.xi") c.xi = to_real(key, value);
  else if (key == "solver.c_grid") c.c_grid = parse_list<double>(key, value, to_real);
  else if (key == "solver.cv_folds") c.cv_folds = static_cast<int>(to_integer(key, value));
  else if (key == "solver.fqi_sweeps") c.fqi_sweeps = static_cast<int>(to_integer(key, value));
  else if (key == "eval.target_softening") c.target_softening = to_real(key, value);
  else if (key == "eval.mc_rollouts") c.mc_rollouts = to_count(key, value);
  else if (key == "run.reps") c.reps = static_cast<int>(to_integer(key, value));
  else if (key == "run.seed") c.seed = to_seed(key, value);
  else if (key == "run.workers") c.workers = static_cast<int>(to_integer(key, value));
  else if (key == "run.out") c.out = value;
  else if (key == "sweep.labeled_ratios") c.labeled_ratios = parse_list<double>(key, value, to_real);
  else if (key == "sweep.n_values") c.n_values = parse_list<std::size_t>(key, value, to_count);
  else if (key == "sweep.d_values") c.d_values = parse_list<int>(key, value, to_integer);
  else if (key == "sweep.action_values") c.action_values = parse_list<int>(key, value, to_integer);
  else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_version = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key == "schema_version") saw_version = true;
    apply_config_value(config, key, trim(line.substr(eq + 1)));
  }
  if (!saw_version) throw ConfigError("config is missing schema_version");
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("manifest " + path + ": " + e.what());
    }
    if (!manifest.contains("config") || !manifest["config"].is_object()) {
      throw ConfigError("manifest " + path + " has no config object");
    }
    std::string lines;
    for (const auto& [k, v] : manifest["config"].items()) lines += k + " = " + v.get<std::string>() + "\n";
    return parse_config_text(lines);
  }
  return parse_config_text(text);
}

}  // namespace glmdp
