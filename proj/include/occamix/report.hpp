#pragma once

#include <string>
#include <vector>

#include "occamix/provider.hpp"
#include "occamix/tasks.hpp"

namespace occamix {

// Standard ARC palette for values 0..9, used by the SVG heatmaps.
extern const char* const kArcPalette[kNumColors];

// Full run configuration; echoed verbatim into every artifact.
struct RunConfig {
  std::vector<std::string> task_paths;
  std::string pool_path;
  std::string fixture_id;
  std::string remote_url;
  std::string model_name = "gpt-4";
  int remote_n = 6;
  AccuracyPolicy policy = AccuracyPolicy::AllCells;
  double epsilon = 0.1;
  double delta = 0.05;
  Connectivity connectivity = Connectivity::Four;
  SplitMode split = SplitMode::Paper;
  std::string out_dir = "out";
  std::string cache_dir = ".occamix-cache";
  std::string api_key_env = "OCCAMIX_API_KEY";
  unsigned long long seed = 0;

  EvalConfig eval_config() const {
    EvalConfig c;
    c.policy = policy;
    c.noise.epsilon = epsilon;
    c.delta = delta;
    c.connectivity = connectivity;
    c.split = split;
    return c;
  }
};

void validate_run_config(const RunConfig& config);
ojson run_config_to_json(const RunConfig& config);

// Mean over cells of sum_v (P(v) - [truth == v])^2.
double brier_score(const WeightedMatrix& matrix, const Grid& truth);

// One JSON document carrying everything; every other artifact (markdown,
// SVG) is rendered from this without recomputation.
ojson result_to_json(const EvaluationResult& result, const RunConfig& config,
                     const std::string& pool_hash);

// Ranked-table subset written by the `score` subcommand.
ojson scores_to_json(const EvaluationResult& result, const RunConfig& config,
                     const std::string& pool_hash);

std::string scores_markdown(const ojson& scores_json);
std::string result_markdown(const ojson& result_json);

// Per-cell heatmap: cell color = argmax value, opacity = confidence,
// centered text = confidence. `method` is "solomonoff" or "bma".
std::string heatmap_svg(const ojson& result_json, const std::string& method);

// Batch summary across tasks. `task_entries` are per-task rows, either
// successful summaries or error records.
ojson compare_to_json(const std::vector<ojson>& task_entries,
                      const RunConfig& config);
std::string compare_markdown(const ojson& compare_json);

// Per-task row of the comparison report, derived from a result document.
ojson compare_entry(const ojson& result_json);

}  // namespace occamix
