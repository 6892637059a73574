#include "occamix/tasks.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>

namespace occamix {

namespace {

Grid grid_field(const nlohmann::json& obj, const std::string& where,
                const char* key) {
  if (!obj.contains(key))
    throw Error(ErrorCode::SchemaError, where + "." + key + " is missing");
  try {
    return grid_from_json(obj.at(key));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw;
    throw Error(ErrorCode::GridValidationError,
                where + "." + key + ": " + e.what());
  }
}

}  // namespace

TaskBundle task_from_json(const nlohmann::json& doc, std::string task_id) {
  if (!doc.is_object())
    throw Error(ErrorCode::SchemaError, "task document must be an object");
  if (!doc.contains("train"))
    throw Error(ErrorCode::SchemaError, "train is missing");
  if (!doc.at("train").is_array() || doc.at("train").empty())
    throw Error(ErrorCode::SchemaError, "train must be a nonempty array");
  if (!doc.contains("test"))
    throw Error(ErrorCode::SchemaError, "test is missing");
  if (!doc.at("test").is_array())
    throw Error(ErrorCode::SchemaError, "test must be an array");

  TaskBundle bundle;
  bundle.task_id = std::move(task_id);
  int i = 0;
  for (const auto& pair : doc.at("train")) {
    const std::string where = "train[" + std::to_string(i++) + "]";
    GridPair gp{grid_field(pair, where, "input"),
                grid_field(pair, where, "output")};
    if (gp.input.rows() != gp.output.rows() ||
        gp.input.cols() != gp.output.cols())
      throw Error(ErrorCode::GridValidationError,
                  where + ": input and output dimensions differ");
    bundle.train.push_back(std::move(gp));
  }
  i = 0;
  for (const auto& pair : doc.at("test")) {
    const std::string where = "test[" + std::to_string(i++) + "]";
    TestPair tp;
    tp.input = grid_field(pair, where, "input");
    if (pair.contains("output")) {
      tp.output = grid_field(pair, where, "output");
      if (tp.input.rows() != tp.output.rows() ||
          tp.input.cols() != tp.output.cols())
        throw Error(ErrorCode::GridValidationError,
                    where + ": input and output dimensions differ");
    } else {
      tp.output_withheld = true;
    }
    bundle.test.push_back(std::move(tp));
  }
  return bundle;
}

TaskBundle load_task(const std::string& path) {
  const std::string text = read_text_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaError,
                "'" + path + "' is not valid JSON: " + e.what());
  }
  return task_from_json(doc, std::filesystem::path(path).stem().string());
}

ojson task_to_json(const TaskBundle& bundle) {
  ojson doc;
  doc["train"] = ojson::array();
  for (const auto& pair : bundle.train) {
    ojson p;
    p["input"] = grid_to_json(pair.input);
    p["output"] = grid_to_json(pair.output);
    doc["train"].push_back(std::move(p));
  }
  doc["test"] = ojson::array();
  for (const auto& pair : bundle.test) {
    ojson p;
    p["input"] = grid_to_json(pair.input);
    if (!pair.output_withheld) p["output"] = grid_to_json(pair.output);
    doc["test"].push_back(std::move(p));
  }
  return doc;
}

const char* split_mode_name(SplitMode mode) {
  return mode == SplitMode::Paper ? "paper" : "full";
}

namespace {

// Combined example sequence: train pairs first, then test pairs.
struct CombinedExample {
  const Grid* input;
  const Grid* output;  // nullptr when withheld
};

std::vector<CombinedExample> combined_examples(const TaskBundle& bundle) {
  std::vector<CombinedExample> all;
  for (const auto& p : bundle.train) all.push_back({&p.input, &p.output});
  for (const auto& p : bundle.test)
    all.push_back({&p.input, p.output_withheld ? nullptr : &p.output});
  return all;
}

}  // namespace

std::vector<Split> leave_one_out_splits(const TaskBundle& bundle,
                                        SplitMode mode) {
  const auto all = combined_examples(bundle);
  const int n = static_cast<int>(all.size());
  if (n < 2)
    throw Error(ErrorCode::TooFewExamples,
                "leave-one-out needs at least 2 examples, got " +
                    std::to_string(n));

  auto make_split = [&](int held_out) -> std::optional<Split> {
    Split split;
    split.held_out_index = held_out;
    split.held_out.input = *all[held_out].input;
    if (all[held_out].output) {
      split.held_out.output = *all[held_out].output;
    } else {
      split.held_out.output_withheld = true;
    }
    for (int j = 0; j < n; ++j) {
      if (j == held_out) continue;
      if (mode == SplitMode::Paper && j > held_out) continue;
      if (!all[j].output) continue;  // withheld outputs cannot train
      split.train.push_back({*all[j].input, *all[j].output});
    }
    if (split.train.empty()) return std::nullopt;
    return split;
  };

  std::vector<Split> splits;
  if (mode == SplitMode::Paper) {
    if (auto s = make_split(n - 1)) splits.push_back(std::move(*s));
  } else {
    for (int i = 0; i < n; ++i)
      if (auto s = make_split(i)) splits.push_back(std::move(*s));
  }
  if (splits.empty())
    throw Error(ErrorCode::TooFewExamples,
                "no split has a nonempty training subset");
  return splits;
}

namespace {

double mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

MethodResult make_method_result(const std::vector<Grid>& predictions,
                                const std::vector<double>& weights,
                                WeightMethod method,
                                const ScoredPool& scores,
                                const TestPair& held_out,
                                std::vector<std::string>* warnings) {
  MethodResult result;
  result.matrix = build_weighted_matrix(predictions, weights, method);
  result.prediction = argmax_prediction(result.matrix);
  result.weight_entropy = shannon_entropy(weights);
  result.max_weight =
      weights.empty() ? 0.0 : *std::max_element(weights.begin(), weights.end());
  result.mean_confidence = mean(confidence_map(result.matrix));
  result.mean_entropy = mean(entropy_map(result.matrix));
  if (!held_out.output_withheld) {
    result.top1_accuracy_all =
        cell_accuracy(result.prediction, held_out.output,
                      AccuracyPolicy::AllCells, warnings);
    result.top1_accuracy_nonbg =
        cell_accuracy(result.prediction, held_out.output,
                      AccuracyPolicy::NonBackgroundOnly, warnings);
  }

  // Ranking under this method's weight; same deterministic tie-break as
  // the canonical table.
  std::vector<const ScoreBreakdown*> order;
  for (const auto& b : scores.ranked) order.push_back(&b);
  std::sort(order.begin(), order.end(),
            [method](const ScoreBreakdown* a, const ScoreBreakdown* b) {
              const double wa = method == WeightMethod::Solomonoff
                                    ? a->solomonoff_weight
                                    : a->bma_weight;
              const double wb = method == WeightMethod::Solomonoff
                                    ? b->solomonoff_weight
                                    : b->bma_weight;
              if (wa != wb) return wa > wb;
              if (a->accuracy != b->accuracy) return a->accuracy > b->accuracy;
              if (a->length != b->length) return a->length < b->length;
              return a->hypothesis_id < b->hypothesis_id;
            });
  for (const auto* b : order) result.ranking_ids.push_back(b->hypothesis_id);
  return result;
}

}  // namespace

EvaluationResult evaluate_split(const TaskBundle& bundle, const Split& split,
                                const std::vector<Hypothesis>& pool,
                                const EvalConfig& config) {
  EvaluationResult result;
  result.task_id = bundle.task_id;
  result.config = config;
  result.pool_size = static_cast<int>(pool.size());
  result.held_out_index = split.held_out_index;
  result.held_out_withheld = split.held_out.output_withheld;
  result.train_count = static_cast<int>(split.train.size());
  result.held_out_input = split.held_out.input;
  if (!split.held_out.output_withheld)
    result.held_out_output = split.held_out.output;

  result.scores =
      score_pool(pool, split.train, config.policy, config.noise, config.delta);
  result.warnings = result.scores.warnings;

  const int n = static_cast<int>(pool.size());
  std::vector<Grid> predictions(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i)
    predictions[i] = apply_program(pool[i].program, split.held_out.input);

  // Weight vectors in pool order, aligned with `predictions`.
  std::vector<double> w_sol(n), w_bma(n);
  for (const ScoreBreakdown& b : result.scores.ranked) {
    w_sol[b.pool_index] = b.solomonoff_weight;
    w_bma[b.pool_index] = b.bma_weight;
  }

  result.solomonoff =
      make_method_result(predictions, w_sol, WeightMethod::Solomonoff,
                         result.scores, split.held_out, &result.warnings);
  result.bma = make_method_result(predictions, w_bma, WeightMethod::BMA,
                                  result.scores, split.held_out,
                                  &result.warnings);
  return result;
}

EvaluationResult evaluate_task(const TaskBundle& bundle,
                               const std::vector<Hypothesis>& pool,
                               const EvalConfig& config) {
  const auto splits = leave_one_out_splits(bundle, SplitMode::Paper);
  return evaluate_split(bundle, splits.front(), pool, config);
}

}  // namespace occamix
