#include "glmdp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "glmdp/baselines.hpp"
#include "glmdp/errors.hpp"
#include "glmdp/eval.hpp"
#include "glmdp/gpevi.hpp"
#include "json.hpp"

namespace glmdp {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

double labeled_ratio_of(std::size_t n, std::size_t N) {
  return n + N == 0 ? 1.0 : static_cast<double>(n) / static_cast<double>(n + N);
}

struct Stats {
  std::size_t count = 0;
  std::size_t failed = 0;
  double mean = 0.0;
  double sd = 0.0;
  std::optional<double> mean_subopt;
  std::optional<double> mean_c;
};

Stats summarize(const std::vector<const RunRecord*>& group) {
  Stats s;
  std::vector<double> values, subopts, cs;
  for (const RunRecord* r : group) {
    if (!r->ok) {
      ++s.failed;
      continue;
    }
    values.push_back(r->value);
    if (r->subopt) subopts.push_back(*r->subopt);
    if (r->c) cs.push_back(*r->c);
  }
  s.count = values.size();
  auto mean = [](const std::vector<double>& v) {
    double t = 0.0;
    for (double x : v) t += x;
    return t / static_cast<double>(v.size());
  };
  if (!values.empty()) {
    s.mean = mean(values);
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - s.mean) * (v - s.mean);
      s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
  }
  if (!subopts.empty()) s.mean_subopt = mean(subopts);
  if (!cs.empty()) s.mean_c = mean(cs);
  return s;
}

std::string opt_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << contents;
  if (!out) throw DataError("failed writing " + path.string());
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir + ": " + ec.message());
}

ojson config_json(const ExperimentConfig& config) {
  ojson c = ojson::object();
  for (const auto& [k, v] : config.to_key_values()) c[k] = v;
  return c;
}

bool method_has_c(const std::string& m) { return m != "single_q" && m != "global_q"; }

int failure_exit_code(const std::vector<RunRecord>& records, std::ostream& log) {
  // a (cell, method) group whose every replication failed
  std::map<std::tuple<std::string, int, int, int, std::size_t, std::size_t, std::string>, std::pair<int, int>> groups;
  for (const auto& r : records) {
    auto& g = groups[{to_string(r.family), r.d, r.n_actions, r.horizon, r.n_labeled, r.n_unlabeled, r.method}];
    ++g.first;
    if (!r.ok) ++g.second;
  }
  int code = 0;
  for (const auto& [key, counts] : groups) {
    if (counts.first > 0 && counts.first == counts.second) {
      log << "error: method " << std::get<6>(key) << " failed on every replication (d=" << std::get<1>(key)
          << ", actions=" << std::get<2>(key) << ", n=" << std::get<4>(key) << ", N=" << std::get<5>(key) << ")\n";
      code = 4;
    }
  }
  return code;
}

int write_run_outputs(const ExperimentConfig& config, const std::string& command, std::size_t n_cells,
                      const std::vector<RunRecord>& records, std::ostream& log) {
  ensure_dir(config.out);
  std::string jsonl;
  for (const auto& r : records) jsonl += r.to_json_line() + "\n";
  std::ostringstream summary;
  write_summary_csv(summary, records);
  const fs::path dir(config.out);
  write_file(dir / "results.jsonl", jsonl);
  write_file(dir / "summary.csv", summary.str());

  ojson manifest;
  manifest["schema_version"] = kConfigSchemaVersion;
  manifest["command"] = command;
  manifest["seed"] = config.seed;
  manifest["cells"] = n_cells;
  manifest["records"] = records.size();
  manifest["config"] = config_json(config);
  manifest["files"] = {{"results.jsonl", fnv1a_hex(jsonl)}, {"summary.csv", fnv1a_hex(summary.str())}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  log << command << ": " << records.size() << " records written to " << config.out << "\n";
  return failure_exit_code(records, log);
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_name(bytes)));
  return buf;
}

std::string RunRecord::to_json_line() const {
  ojson j;
  j["method"] = method;
  j["rep"] = rep;
  j["seed"] = seed;
  j["axis"] = axis;
  j["family"] = to_string(family);
  j["d"] = d;
  j["n_actions"] = n_actions;
  j["horizon"] = horizon;
  j["n_labeled"] = n_labeled;
  j["n_unlabeled"] = n_unlabeled;
  j["labeled_ratio"] = labeled_ratio;
  j["c"] = c ? ojson(*c) : ojson(nullptr);
  j["value"] = value;
  j["std_error"] = std_error;
  j["subopt"] = subopt ? ojson(*subopt) : ojson(nullptr);
  j["train_seconds"] = train_seconds;
  j["ok"] = ok;
  j["error"] = error;
  return j.dump();
}

std::optional<RunRecord> RunRecord::from_json_line(const std::string& line) {
  try {
    const ojson j = ojson::parse(line);
    RunRecord r;
    r.method = j.at("method").get<std::string>();
    r.rep = j.at("rep").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.axis = j.at("axis").get<std::string>();
    r.family = reward_family_from_name(j.at("family").get<std::string>());
    r.d = j.at("d").get<int>();
    r.n_actions = j.at("n_actions").get<int>();
    r.horizon = j.at("horizon").get<int>();
    r.n_labeled = j.at("n_labeled").get<std::size_t>();
    r.n_unlabeled = j.at("n_unlabeled").get<std::size_t>();
    r.labeled_ratio = j.at("labeled_ratio").get<double>();
    if (!j.at("c").is_null()) r.c = j.at("c").get<double>();
    r.ok = j.at("ok").get<bool>();
    // failed records carry no estimate
    if (r.ok || !j.at("value").is_null()) r.value = j.at("value").get<double>();
    if (r.ok || !j.at("std_error").is_null()) r.std_error = j.at("std_error").get<double>();
    if (!j.at("subopt").is_null()) r.subopt = j.at("subopt").get<double>();
    r.train_seconds = j.at("train_seconds").get<double>();
    r.error = j.at("error").get<std::string>();
    if (r.axis != "n" && r.axis != "ratio") return std::nullopt;
    return r;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

Replication make_replication(const ExperimentConfig& config, std::uint64_t rep_seed) {
  Replication rep{rep_seed,
                  nullptr,
                  nullptr,
                  nullptr,
                  TrajectoryDataset(config.horizon, config.n_actions, static_cast<std::size_t>(config.d)),
                  TrajectoryDataset(config.horizon, config.n_actions, static_cast<std::size_t>(config.d)),
                  TrajectoryDataset(config.horizon, config.n_actions, static_cast<std::size_t>(config.d)),
                  TrajectoryDataset(config.horizon, config.n_actions, static_cast<std::size_t>(config.d))};
  rep.env = std::make_shared<const SyntheticEnv>(
      make_env_spec(config.d, config.n_actions, config.horizon, config.family, rep_seed));
  rep.reference = fit_reference_policy(*rep.env, config.pilot_episodes, rep_seed);
  rep.behavior = std::make_shared<const MixturePolicy>(rep.reference, 0.7);
  rep.full_train = generate_episodes(*rep.env, *rep.behavior, config.n_labeled + config.n_unlabeled,
                                     derive_seed(rep_seed, {streams::kTrain}));
  std::vector<std::size_t> first, rest;
  for (std::size_t i = 0; i < rep.full_train.size(); ++i) (i < config.n_labeled ? first : rest).push_back(i);
  rep.labeled = rep.full_train.select(first);
  rep.unlabeled = rep.full_train.select(rest).without_rewards();
  rep.test = generate_episodes(*rep.env, *rep.behavior, config.test_size, derive_seed(rep_seed, {streams::kTest}));
  return rep;
}

RunRecord run_method(const ExperimentConfig& config, const Replication& rep, const std::string& method,
                     std::optional<double> reference_value) {
  RunRecord record;
  record.method = method;
  record.seed = rep.seed;
  record.family = config.family;
  record.d = config.d;
  record.n_actions = config.n_actions;
  record.horizon = config.horizon;
  record.n_labeled = config.n_labeled;
  record.n_unlabeled = config.n_unlabeled;
  record.labeled_ratio = labeled_ratio_of(config.n_labeled, config.n_unlabeled);

  const auto start = std::chrono::steady_clock::now();
  try {
    GpeviConfig base;
    base.lambda = config.lambda;
    base.xi = config.xi;
    base.link = rep.env->link();
    base.features = rep.env->features();
    const RewardRange range = default_reward_range(base.link, config.resolved_norm_bound());
    const bool unbounded = method == "gpevi_unbounded" || method == "ssgpevi_unbounded";
    const bool semi = method == "ssgpevi" || method == "ssgpevi_unbounded";

    auto with_c = [&](double c) {
      GpeviConfig cfg = base;
      cfg.c_r = c;
      cfg.c_p = c;
      return cfg;
    };

    CvFitFn fit;
    const TrajectoryDataset* train = &rep.labeled;
    if (method == "gpevi" || method == "gpevi_full" || method == "gpevi_unbounded") {
      if (method == "gpevi_full") train = &rep.full_train;
      fit = [&, unbounded](const TrajectoryDataset& data, double c) -> std::shared_ptr<const Policy> {
        SolveReport r = unbounded ? solve_gpevi_unbounded(data, with_c(c), range) : solve_gpevi(data, with_c(c));
        return std::make_shared<PessimisticPolicy>(std::move(r.policy));
      };
    } else if (semi) {
      fit = [&, unbounded](const TrajectoryDataset& data, double c) -> std::shared_ptr<const Policy> {
        SolveReport r = unbounded ? solve_ssgpevi_unbounded(data, rep.unlabeled, with_c(c), range)
                                  : solve_ssgpevi(data, rep.unlabeled, with_c(c));
        return std::make_shared<PessimisticPolicy>(std::move(r.policy));
      };
    } else if (method == "lpevi") {
      fit = [&](const TrajectoryDataset& data, double c) -> std::shared_ptr<const Policy> {
        LpeviConfig cfg;
        cfg.lambda = config.lambda;
        cfg.xi = config.xi;
        cfg.c = c;
        cfg.features = base.features.transition;
        return std::make_shared<PessimisticPolicy>(solve_lpevi(data, cfg).policy);
      };
    } else if (method == "single_q" || method == "global_q") {
      fit = [&](const TrajectoryDataset& data, double) -> std::shared_ptr<const Policy> {
        FqiConfig cfg;
        cfg.lambda = config.lambda;
        cfg.sweeps = config.fqi_sweeps;
        cfg.features = base.features.transition;
        return std::make_shared<LinearQPolicy>(method == "single_q" ? solve_single_q(data, cfg)
                                                                    : solve_global_q(data, cfg));
      };
    } else {
      throw ConfigError("unknown method '" + method + "'");
    }

    double c = 0.0;
    if (method_has_c(method)) {
      const CvResult cv = cross_validate_c(*train, fit, *rep.behavior, config.c_grid,
                                           derive_seed(rep.seed, {streams::kFolds, hash_name(method)}),
                                           config.cv_folds, config.target_softening);
      c = cv.chosen_c;
      record.c = c;
    }
    std::shared_ptr<const Policy> policy = fit(*train, c);
    record.train_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::shared_ptr<const Policy> target = policy;
    if (config.target_softening > 0.0) target = std::make_shared<SoftenedPolicy>(policy, config.target_softening);
    const OpeEstimate est = step_importance_sampling(rep.test, *target, *rep.behavior);
    record.value = est.value;
    record.std_error = est.std_error;
    if (reference_value && config.mc_rollouts > 0) {
      record.subopt = suboptimality(*rep.env, *policy, *reference_value, config.mc_rollouts,
                                    derive_seed(rep.seed, {streams::kRollout}));
    }
  } catch (const std::exception& e) {
    record.ok = false;
    record.error = e.what();
    record.value = std::nan("");
    record.std_error = std::nan("");
    record.train_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return record;
}

std::vector<RunRecord> run_cells(const std::vector<Cell>& cells, int workers, std::ostream* log) {
  struct Task {
    std::size_t cell;
    int rep;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int r = 0; r < cells[c].config.reps; ++r) tasks.push_back({c, r});

  std::vector<std::vector<RunRecord>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const Cell& cell = cells[tasks[t].cell];
      const ExperimentConfig& cfg = cell.config;
      const int r = tasks[t].rep;
      const std::uint64_t rep_seed = cfg.seed + static_cast<std::uint64_t>(r);
      std::vector<RunRecord>& out = results[t];
      try {
        const Replication rep = make_replication(cfg, rep_seed);
        std::optional<double> reference_value;
        if (cfg.mc_rollouts > 0) {
          reference_value =
              mc_policy_value(*rep.env, *rep.reference, cfg.mc_rollouts, derive_seed(rep_seed, {streams::kRollout}))
                  .value;
        }
        for (const auto& m : cfg.methods) out.push_back(run_method(cfg, rep, m, reference_value));
      } catch (const std::exception& e) {
        out.clear();
        for (const auto& m : cfg.methods) {
          RunRecord rec;
          rec.method = m;
          rec.seed = rep_seed;
          rec.family = cfg.family;
          rec.d = cfg.d;
          rec.n_actions = cfg.n_actions;
          rec.horizon = cfg.horizon;
          rec.n_labeled = cfg.n_labeled;
          rec.n_unlabeled = cfg.n_unlabeled;
          rec.labeled_ratio = labeled_ratio_of(cfg.n_labeled, cfg.n_unlabeled);
          rec.ok = false;
          rec.value = rec.std_error = std::nan("");
          rec.error = e.what();
          out.push_back(std::move(rec));
        }
      }
      for (auto& rec : out) {
        rec.rep = r;
        rec.axis = cell.axis;
      }
      if (log) {
        std::lock_guard<std::mutex> lock(log_mutex);
        *log << "[cell " << tasks[t].cell + 1 << "/" << cells.size() << "] rep " << r + 1 << "/" << cfg.reps;
        for (const auto& rec : out) *log << "  " << rec.method << (rec.ok ? "=" + format_real(rec.value) : "=FAILED");
        *log << "\n";
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // canonical order: cell, then the configured method order, then replication
  std::vector<RunRecord> records;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t m = 0; m < cells[c].config.methods.size(); ++m) {
      for (std::size_t t = 0; t < tasks.size(); ++t) {
        if (tasks[t].cell == c) records.push_back(results[t][m]);
      }
    }
  }
  return records;
}

std::vector<Cell> expand_sweep(const ExperimentConfig& config) {
  const std::vector<int> ds = config.d_values.empty() ? std::vector<int>{config.d} : config.d_values;
  const std::vector<int> as = config.action_values.empty() ? std::vector<int>{config.n_actions} : config.action_values;
  std::vector<Cell> cells;
  for (int d : ds) {
    for (int a : as) {
      ExperimentConfig cell = config;
      cell.d = d;
      cell.n_actions = a;
      if (!config.labeled_ratios.empty()) {
        const std::size_t total = config.n_labeled + config.n_unlabeled;
        for (double r : config.labeled_ratios) {
          cell.n_labeled = static_cast<std::size_t>(std::llround(r * static_cast<double>(total)));
          cell.n_unlabeled = total - cell.n_labeled;
          cells.push_back({cell, "ratio"});
        }
      } else {
        const std::vector<std::size_t> ns =
            config.n_values.empty() ? std::vector<std::size_t>{config.n_labeled} : config.n_values;
        for (std::size_t n : ns) {
          cell.n_labeled = n;
          cells.push_back({cell, "n"});
        }
      }
    }
  }
  return cells;
}

int cmd_generate(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  ensure_dir(config.out);
  const Replication rep = make_replication(config, config.seed);
  TrajectoryDataset train = rep.labeled;
  for (const auto& e : rep.unlabeled.episodes()) train.add(e);
  const std::string train_csv = dataset_to_csv(train);
  const std::string test_csv = dataset_to_csv(rep.test);
  const fs::path dir(config.out);
  write_file(dir / "train.csv", train_csv);
  write_file(dir / "test.csv", test_csv);

  ojson manifest;
  manifest["schema_version"] = kConfigSchemaVersion;
  manifest["command"] = "generate";
  manifest["seed"] = config.seed;
  manifest["n_train_episodes"] = train.size();
  manifest["n_labeled"] = train.n_labeled();
  manifest["n_unlabeled"] = train.n_unlabeled();
  manifest["n_test_episodes"] = rep.test.size();
  manifest["config"] = config_json(config);
  manifest["files"] = {{"train.csv", fnv1a_hex(train_csv)}, {"test.csv", fnv1a_hex(test_csv)}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  log << "generate: " << train.size() << " training and " << rep.test.size() << " test episodes written to "
      << config.out << "\n";
  return 0;
}

int cmd_run(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  const Cell cell{config, config.n_unlabeled > 0 ? "ratio" : "n"};
  const std::vector<RunRecord> records = run_cells({cell}, config.workers, &log);
  return write_run_outputs(config, "run", 1, records, log);
}

int cmd_sweep(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  const std::vector<Cell> cells = expand_sweep(config);
  const std::vector<RunRecord> records = run_cells(cells, config.workers, &log);
  return write_run_outputs(config, "sweep", cells.size(), records, log);
}

void write_summary_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "family,d,n_actions,horizon,n_labeled,n_unlabeled,labeled_ratio,method,n_ok,n_failed,mean_value,std_value,"
         "mean_c,mean_subopt\n";
  std::size_t i = 0;
  while (i < records.size()) {
    const RunRecord& head = records[i];
    std::vector<const RunRecord*> group;
    while (i < records.size() && records[i].method == head.method && records[i].d == head.d &&
           records[i].n_actions == head.n_actions && records[i].horizon == head.horizon &&
           records[i].family == head.family && records[i].n_labeled == head.n_labeled &&
           records[i].n_unlabeled == head.n_unlabeled) {
      group.push_back(&records[i++]);
    }
    const Stats s = summarize(group);
    out << to_string(head.family) << ',' << head.d << ',' << head.n_actions << ',' << head.horizon << ','
        << head.n_labeled << ',' << head.n_unlabeled << ',' << format_real(head.labeled_ratio) << ',' << head.method
        << ',' << s.count << ',' << s.failed << ',' << (s.count ? format_real(s.mean) : "") << ','
        << (s.count ? format_real(s.sd) : "") << ',' << opt_real(s.mean_c) << ',' << opt_real(s.mean_subopt) << '\n';
  }
}

ReportResult cmd_report(const std::string& results_dir, std::ostream& log) {
  ReportResult result;
  const fs::path dir(results_dir);
  std::vector<RunRecord> records;
  std::ifstream in(dir / "results.jsonl");
  if (!in) {
    ++result.warnings;
    log << "warning: no results.jsonl in " << results_dir << "\n";
  } else {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      auto rec = RunRecord::from_json_line(line);
      if (!rec) {
        ++result.warnings;
        log << "warning: skipping unreadable record on line " << line_no << "\n";
        continue;
      }
      records.push_back(std::move(*rec));
    }
  }
  result.records = records.size();
  ensure_dir(results_dir);

  using NKey = std::tuple<std::string, int, int, int, std::size_t, std::string>;
  using RKey = std::tuple<std::string, int, int, int, std::size_t, double, std::string>;
  std::map<NKey, std::vector<const RunRecord*>> by_n;
  std::map<RKey, std::vector<const RunRecord*>> by_ratio;
  for (const auto& r : records) {
    if (r.axis == "ratio") {
      by_ratio[{to_string(r.family), r.d, r.n_actions, r.horizon, r.n_labeled + r.n_unlabeled, r.labeled_ratio,
                r.method}]
          .push_back(&r);
    } else {
      by_n[{to_string(r.family), r.d, r.n_actions, r.horizon, r.n_labeled, r.method}].push_back(&r);
    }
  }

  std::ostringstream n_csv, ratio_csv;
  n_csv << "family,d,n_actions,horizon,n_labeled,method,count,n_failed,mean_value,std_value,mean_subopt\n";
  for (const auto& [k, group] : by_n) {
    const Stats s = summarize(group);
    n_csv << std::get<0>(k) << ',' << std::get<1>(k) << ',' << std::get<2>(k) << ',' << std::get<3>(k) << ','
          << std::get<4>(k) << ',' << std::get<5>(k) << ',' << s.count << ',' << s.failed << ','
          << (s.count ? format_real(s.mean) : "") << ',' << (s.count ? format_real(s.sd) : "") << ','
          << opt_real(s.mean_subopt) << '\n';
  }
  ratio_csv
      << "family,d,n_actions,horizon,n_total,labeled_ratio,method,count,n_failed,mean_value,std_value,mean_subopt\n";
  for (const auto& [k, group] : by_ratio) {
    const Stats s = summarize(group);
    ratio_csv << std::get<0>(k) << ',' << std::get<1>(k) << ',' << std::get<2>(k) << ',' << std::get<3>(k) << ','
              << std::get<4>(k) << ',' << format_real(std::get<5>(k)) << ',' << std::get<6>(k) << ',' << s.count
              << ',' << s.failed << ',' << (s.count ? format_real(s.mean) : "") << ','
              << (s.count ? format_real(s.sd) : "") << ',' << opt_real(s.mean_subopt) << '\n';
  }
  write_file(dir / "value_vs_n.csv", n_csv.str());
  write_file(dir / "value_vs_ratio.csv", ratio_csv.str());
  log << "report: " << result.records << " records, " << result.warnings << " warnings\n";
  return result;
}

}  // namespace glmdp
