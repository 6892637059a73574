#pragma once

#include <optional>
#include <string>
#include <vector>

#include "occamix/json_io.hpp"
#include "occamix/mixture.hpp"
#include "occamix/scoring.hpp"

namespace occamix {

struct TestPair {
  Grid input;
  Grid output;  // unused when output_withheld
  bool output_withheld = false;
};

// One ARC-style task: ordered train pairs plus test pair(s).
struct TaskBundle {
  std::string task_id;
  std::vector<GridPair> train;
  std::vector<TestPair> test;

  int example_count() const {
    return static_cast<int>(train.size() + test.size());
  }
};

// Parses the ARC community JSON shape; task_id defaults to the file stem.
// Errors: IoError, SchemaError (naming the field), GridValidationError.
TaskBundle load_task(const std::string& path);
TaskBundle task_from_json(const nlohmann::json& doc, std::string task_id);
ojson task_to_json(const TaskBundle& bundle);

enum class SplitMode { Paper, Full };

const char* split_mode_name(SplitMode mode);

struct Split {
  std::vector<GridPair> train;
  TestPair held_out;
  int held_out_index = 0;  // position in the combined train+test sequence
};

// Paper mode: the single "first n-1 train / n-th held out" split. Full
// mode: one split per example, training on every other example that has
// an output.
std::vector<Split> leave_one_out_splits(const TaskBundle& bundle,
                                        SplitMode mode);

struct EvalConfig {
  AccuracyPolicy policy = AccuracyPolicy::AllCells;
  NoiseModel noise;
  double delta = 0.05;
  Connectivity connectivity = Connectivity::Four;
  SplitMode split = SplitMode::Paper;
};

// Everything derived from one weight method on one split.
struct MethodResult {
  WeightedMatrix matrix;
  Grid prediction;
  std::vector<std::string> ranking_ids;  // ids by this method's weight desc
  double weight_entropy = 0.0;
  double max_weight = 0.0;
  double mean_confidence = 0.0;
  double mean_entropy = 0.0;
  std::optional<double> top1_accuracy_all;
  std::optional<double> top1_accuracy_nonbg;
};

struct EvaluationResult {
  std::string task_id;
  EvalConfig config;
  int pool_size = 0;
  int held_out_index = 0;
  bool held_out_withheld = false;
  int train_count = 0;
  Grid held_out_input;
  std::optional<Grid> held_out_output;
  ScoredPool scores;  // shared table, solomonoff-ranked
  MethodResult solomonoff;
  MethodResult bma;
  std::vector<std::string> warnings;
};

// Scores the pool on the split's train set, applies every hypothesis to the
// held-out input and builds both weighted matrices plus derived metrics.
EvaluationResult evaluate_split(const TaskBundle& bundle, const Split& split,
                                const std::vector<Hypothesis>& pool,
                                const EvalConfig& config);

// Evaluates the default split (train on the first n-1 examples, hold out
// the last) under `config`.
EvaluationResult evaluate_task(const TaskBundle& bundle,
                               const std::vector<Hypothesis>& pool,
                               const EvalConfig& config);

}  // namespace occamix
