// occamix CLI: score | predict | compare | report
//
// Pipeline per task: load task -> obtain hypothesis pool -> score pool on
// the training split -> apply pool to the held-out input -> weighted
// aggregation -> artifacts (JSON + markdown + SVG heatmaps) + JSONL logs.

#include <CLI11.hpp>

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>

#include "occamix/report.hpp"

namespace fs = std::filesystem;
using namespace occamix;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// Line-atomic JSONL logging to stdout plus <out>/run.log.jsonl.
class Logger {
public:
  void open(const std::string& path) {
    std::lock_guard<std::mutex> lock(mu_);
    file_.open(path, std::ios::trunc);
  }

  void event(ojson e) {
    const std::string line = e.dump();
    std::lock_guard<std::mutex> lock(mu_);
    std::cout << line << '\n';
    if (file_.is_open()) file_ << line << '\n';
  }

  void stage(const std::string& stage, const std::string& task_id,
             double start_ms, const std::vector<std::string>& warnings = {}) {
    ojson e;
    e["event"] = "stage";
    e["stage"] = stage;
    if (!task_id.empty()) e["task_id"] = task_id;
    e["duration_ms"] = now_ms() - start_ms;
    if (!warnings.empty()) e["warnings"] = warnings;
    event(std::move(e));
  }

private:
  std::mutex mu_;
  std::ofstream file_;
};

// File and fixture pools are task-independent and loaded once; remote pools
// are fetched per task (the prompt depends on the training examples).
class PoolSource {
public:
  explicit PoolSource(const RunConfig& config) : config_(config) {
    if (config_.pool_path.empty() && config_.fixture_id.empty() &&
        config_.remote_url.empty())
      throw Error(ErrorCode::ConfigError,
                  "a pool source is required: --pool, --fixture or --remote");
    if (!config_.pool_path.empty())
      static_pool_ = load_pool(config_.pool_path);
    else if (!config_.fixture_id.empty())
      static_pool_ = scripted_pool(config_.fixture_id);
  }

  std::vector<Hypothesis> get(const TaskBundle& task,
                              std::vector<std::string>* warnings) {
    if (static_pool_) return *static_pool_;
    RemoteSource source;
    source.endpoint_url = config_.remote_url;
    source.model_name = config_.model_name;
    source.n = config_.remote_n;
    ResponseCache cache(config_.cache_dir);
    const char* key = std::getenv(config_.api_key_env.c_str());
    return fetch_remote_pool(task, source, cache, config_.connectivity,
                             key ? key : "", warnings);
  }

private:
  const RunConfig& config_;
  std::optional<std::vector<Hypothesis>> static_pool_;
};

std::string artifact_base(const RunConfig& config, const std::string& task_id,
                          int held_out_index) {
  std::string base = (fs::path(config.out_dir) / task_id).string();
  if (config.split == SplitMode::Full)
    base += ".s" + std::to_string(held_out_index);
  return base;
}

struct TaskOutput {
  std::vector<ojson> results;  // one per split
};

TaskOutput run_task(const std::string& path, const RunConfig& config,
                    PoolSource& pools, Logger& log) {
  const double t0 = now_ms();
  const TaskBundle bundle = load_task(path);
  log.stage("load_task", bundle.task_id, t0);

  std::vector<std::string> pool_warnings;
  const double t1 = now_ms();
  const std::vector<Hypothesis> pool = pools.get(bundle, &pool_warnings);
  log.stage("obtain_pool", bundle.task_id, t1, pool_warnings);
  const std::string pool_hash = pool_content_hash(pool);

  const auto splits = leave_one_out_splits(bundle, config.split);
  TaskOutput out;
  for (const Split& split : splits) {
    const double t2 = now_ms();
    EvaluationResult result =
        evaluate_split(bundle, split, pool, config.eval_config());
    for (const auto& w : pool_warnings) result.warnings.push_back(w);
    out.results.push_back(result_to_json(result, config, pool_hash));
    log.stage("evaluate", bundle.task_id, t2, result.warnings);
  }
  return out;
}

void write_score_artifacts(const ojson& result_json, const RunConfig& config) {
  // The scores document is the result document minus prediction payloads.
  ojson scores;
  for (const char* key : {"schema", "task_id", "config", "pool_hash",
                          "pool_size", "split", "warnings",
                          "degenerate_uniform", "ranking"})
    scores[key] = result_json.at(key);
  scores["schema"] = "occamix.scores.v1";
  const std::string base =
      artifact_base(config, result_json.at("task_id").get<std::string>(),
                    result_json.at("split").at("held_out_index").get<int>());
  write_text_file(base + ".scores.json", dump_fixed(scores));
  write_text_file(base + ".scores.md", scores_markdown(scores));
}

void write_predict_artifacts(const ojson& result_json,
                             const RunConfig& config) {
  const std::string base =
      artifact_base(config, result_json.at("task_id").get<std::string>(),
                    result_json.at("split").at("held_out_index").get<int>());
  write_text_file(base + ".result.json", dump_fixed(result_json));
  write_text_file(base + ".result.md", result_markdown(result_json));
  write_text_file(base + ".solomonoff.svg",
                  heatmap_svg(result_json, "solomonoff"));
  write_text_file(base + ".bma.svg", heatmap_svg(result_json, "bma"));
}

int run_batch(const RunConfig& config, bool scores_only, bool with_compare,
              Logger& log) {
  if (config.task_paths.empty())
    throw Error(ErrorCode::ConfigError, "at least one --task is required");
  PoolSource pools(config);

  const int n_tasks = static_cast<int>(config.task_paths.size());
  std::vector<std::vector<ojson>> entries(n_tasks);
  std::vector<std::optional<int>> failures(n_tasks);
  std::vector<std::string> failure_messages(n_tasks);

  // Tasks are independent; artifacts are per task, logging is line-atomic.
  // Exceptions must not unwind out of the parallel region, so every task
  // failure is captured and handled afterwards.
#pragma omp parallel for schedule(dynamic) if (n_tasks > 1)
  for (int i = 0; i < n_tasks; ++i) {
    const std::string& path = config.task_paths[i];
    try {
      TaskOutput out = run_task(path, config, pools, log);
      for (const ojson& result_json : out.results) {
        if (scores_only) {
          write_score_artifacts(result_json, config);
        } else {
          write_predict_artifacts(result_json, config);
        }
        if (with_compare) {
          ojson entry = compare_entry(result_json);
          if (config.split == SplitMode::Full)
            entry["task_id"] =
                entry["task_id"].get<std::string>() + "#s" +
                std::to_string(
                    result_json.at("split").at("held_out_index").get<int>());
          entries[i].push_back(std::move(entry));
        }
      }
    } catch (const Error& e) {
      failures[i] = error_exit_code(e.code());
      failure_messages[i] = e.what();
      if (with_compare) {
        ojson entry;
        entry["task_id"] = fs::path(path).stem().string();
        entry["status"] = "error";
        entry["error"] = e.what();
        entries[i].push_back(std::move(entry));
      }
      ojson ev;
      ev["event"] = "task_error";
      ev["task"] = path;
      ev["error"] = e.what();
      log.event(std::move(ev));
    }
  }

  if (!with_compare) {
    // score/predict abort on the first failing task.
    for (int i = 0; i < n_tasks; ++i)
      if (failures[i]) {
        std::cerr << "error: " << failure_messages[i] << '\n';
        return *failures[i];
      }
  }

  if (with_compare) {
    std::vector<ojson> flat;
    for (auto& per_task : entries)
      for (auto& e : per_task) flat.push_back(std::move(e));
    const ojson compare = compare_to_json(flat, config);
    const std::string base = (fs::path(config.out_dir) / "compare").string();
    write_text_file(base + ".json", dump_fixed(compare));
    write_text_file(base + ".md", compare_markdown(compare));
    bool any_ok = false;
    std::optional<int> first_failure;
    for (int i = 0; i < n_tasks; ++i) {
      if (failures[i] && !first_failure) first_failure = failures[i];
      if (!failures[i]) any_ok = true;
    }
    if (!any_ok && first_failure) return *first_failure;
  }
  return 0;
}

int run_report(const std::string& in_dir) {
  if (!fs::is_directory(in_dir))
    throw Error(ErrorCode::IoError, "'" + in_dir + "' is not a directory");
  int rendered = 0;
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(in_dir))
    if (entry.is_regular_file()) paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    const std::string name = path.filename().string();
    auto ends_with = [&](const std::string& suffix) {
      return name.size() > suffix.size() &&
             name.compare(name.size() - suffix.size(), suffix.size(),
                          suffix) == 0;
    };
    if (ends_with(".result.json")) {
      const ojson doc = ojson::parse(read_text_file(path.string()));
      const std::string base =
          path.string().substr(0, path.string().size() - 5);  // drop .json
      write_text_file(base + ".md", result_markdown(doc));
      const std::string stem =
          path.string().substr(0, path.string().size() - 12);  // .result.json
      write_text_file(stem + ".solomonoff.svg", heatmap_svg(doc, "solomonoff"));
      write_text_file(stem + ".bma.svg", heatmap_svg(doc, "bma"));
      ++rendered;
    } else if (ends_with(".scores.json")) {
      const ojson doc = ojson::parse(read_text_file(path.string()));
      const std::string base =
          path.string().substr(0, path.string().size() - 5);
      write_text_file(base + ".md", scores_markdown(doc));
      ++rendered;
    }
  }
  if (rendered == 0)
    throw Error(ErrorCode::IoError,
                "no .result.json or .scores.json artifacts in '" + in_dir +
                    "'");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simplicity-weighted hypothesis scoring and per-cell "
               "prediction mixtures for ARC-style grid tasks"};
  app.require_subcommand(1);
  app.set_config("--config", "", "config file with key=value lines");

  RunConfig config;
  std::string policy = "all", connectivity = "4", split = "paper";
  std::string report_in = "out";

  app.add_option("--task", config.task_paths, "task JSON file(s)");
  app.add_option("--pool", config.pool_path, "hypothesis pool JSON file");
  app.add_option("--fixture", config.fixture_id,
                 "built-in pool fixture id (task_a_6, task_b_6, task_c_20, "
                 "clean_single, degenerate_equal_length)");
  app.add_option("--remote", config.remote_url,
                 "chat-completion endpoint URL");
  app.add_option("--model", config.model_name, "remote model name");
  app.add_option("--n", config.remote_n, "hypotheses to request remotely");
  app.add_option("--policy", policy, "accuracy policy: all|nonbg");
  app.add_option("--epsilon", config.epsilon, "BMA noise parameter in (0,1)");
  app.add_option("--delta", config.delta, "simplicity floor in [0,1]");
  app.add_option("--connectivity", connectivity,
                 "object connectivity: 4|8 (serialization only)");
  app.add_option("--split", split, "leave-one-out mode: paper|full");
  app.add_option("--out", config.out_dir, "artifact output directory");
  app.add_option("--cache-dir", config.cache_dir, "remote response cache");
  app.add_option("--api-key-env", config.api_key_env,
                 "environment variable holding the API key");
  app.add_option("--seed", config.seed, "seed echoed into artifacts");

  CLI::App* cmd_score = app.add_subcommand("score", "write ranked-score tables");
  CLI::App* cmd_predict =
      app.add_subcommand("predict", "write matrices, predictions, heatmaps");
  CLI::App* cmd_compare =
      app.add_subcommand("compare", "aggregate method comparison over tasks");
  CLI::App* cmd_report =
      app.add_subcommand("report", "re-render markdown/SVG from artifacts");
  cmd_report->add_option("--in", report_in, "artifact directory to render");
  for (CLI::App* sub : {cmd_score, cmd_predict, cmd_compare, cmd_report})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (policy == "all") config.policy = AccuracyPolicy::AllCells;
    else if (policy == "nonbg") config.policy = AccuracyPolicy::NonBackgroundOnly;
    else throw Error(ErrorCode::ConfigError, "--policy must be all|nonbg");
    if (connectivity == "4") config.connectivity = Connectivity::Four;
    else if (connectivity == "8") config.connectivity = Connectivity::Eight;
    else throw Error(ErrorCode::ConfigError, "--connectivity must be 4|8");
    if (split == "paper") config.split = SplitMode::Paper;
    else if (split == "full") config.split = SplitMode::Full;
    else throw Error(ErrorCode::ConfigError, "--split must be paper|full");
    validate_run_config(config);

    if (cmd_report->parsed()) return run_report(report_in);

    Logger log;
    fs::create_directories(config.out_dir);
    log.open((fs::path(config.out_dir) / "run.log.jsonl").string());
    ojson start;
    start["event"] = "run_start";
    start["command"] = cmd_score->parsed()     ? "score"
                       : cmd_predict->parsed() ? "predict"
                                               : "compare";
    start["config"] = run_config_to_json(config);
    start["threads"] = omp_get_max_threads();
    log.event(std::move(start));

    const double t0 = now_ms();
    const int code = run_batch(config, cmd_score->parsed(),
                               cmd_compare->parsed(), log);
    ojson done;
    done["event"] = "run_done";
    done["duration_ms"] = now_ms() - t0;
    done["exit_code"] = code;
    log.event(std::move(done));
    return code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return error_exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
}
