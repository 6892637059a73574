#include "occamix/report.hpp"

#include <cmath>
#include <cstdio>

namespace occamix {

const char* const kArcPalette[kNumColors] = {
    "#000000", "#0074D9", "#FF4136", "#2ECC40", "#FFDC00",
    "#AAAAAA", "#F012BE", "#FF851B", "#7FDBFF", "#870C25",
};

void validate_run_config(const RunConfig& config) {
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
    throw Error(ErrorCode::ConfigError, "epsilon must be in (0,1)");
  if (config.delta < 0.0 || config.delta > 1.0)
    throw Error(ErrorCode::ConfigError, "delta must be in [0,1]");
  if (config.remote_n < 1)
    throw Error(ErrorCode::ConfigError, "n must be >= 1");
  const int sources = (config.pool_path.empty() ? 0 : 1) +
                      (config.fixture_id.empty() ? 0 : 1) +
                      (config.remote_url.empty() ? 0 : 1);
  if (sources > 1)
    throw Error(ErrorCode::ConfigError,
                "choose one of --pool, --fixture, --remote");
}

ojson run_config_to_json(const RunConfig& config) {
  ojson j;
  j["tasks"] = config.task_paths;
  j["pool"] = config.pool_path;
  j["fixture"] = config.fixture_id;
  j["remote"] = config.remote_url;
  j["model"] = config.model_name;
  j["n"] = config.remote_n;
  j["policy"] = accuracy_policy_name(config.policy);
  j["epsilon"] = config.epsilon;
  j["delta"] = config.delta;
  j["connectivity"] = connectivity_name(config.connectivity);
  j["split"] = split_mode_name(config.split);
  j["out"] = config.out_dir;
  j["seed"] = config.seed;
  return j;
}

double brier_score(const WeightedMatrix& matrix, const Grid& truth) {
  if (matrix.rows != truth.rows() || matrix.cols != truth.cols())
    throw Error(ErrorCode::DimensionMismatch,
                "matrix and truth grids differ in shape");
  double total = 0.0;
  for (int r = 0; r < matrix.rows; ++r) {
    for (int c = 0; c < matrix.cols; ++c) {
      const auto& probs = matrix.at(r, c).probs;
      for (int v = 0; v < kNumColors; ++v) {
        const double target = truth.at(r, c) == v ? 1.0 : 0.0;
        const double diff = probs[v] - target;
        total += diff * diff;
      }
    }
  }
  return total / static_cast<double>(matrix.rows * matrix.cols);
}

namespace {

std::string fmt6(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

ojson matrix_to_json(const WeightedMatrix& matrix) {
  ojson j;
  j["method"] = weight_method_name(matrix.method);
  j["rows"] = matrix.rows;
  j["cols"] = matrix.cols;
  ojson cells = ojson::array();
  for (int r = 0; r < matrix.rows; ++r) {
    ojson row = ojson::array();
    for (int c = 0; c < matrix.cols; ++c) {
      ojson dist = ojson::object();
      const auto& probs = matrix.at(r, c).probs;
      for (int v = 0; v < kNumColors; ++v)
        if (probs[v] > 0.0) dist[std::to_string(v)] = probs[v];
      row.push_back(std::move(dist));
    }
    cells.push_back(std::move(row));
  }
  j["cells"] = std::move(cells);
  return j;
}

ojson map_to_json(const std::vector<double>& values, int rows, int cols) {
  ojson out = ojson::array();
  for (int r = 0; r < rows; ++r) {
    ojson row = ojson::array();
    for (int c = 0; c < cols; ++c) row.push_back(values[r * cols + c]);
    out.push_back(std::move(row));
  }
  return out;
}

ojson ranking_to_json(const EvaluationResult& result) {
  ojson rows = ojson::array();
  int rank = 1;
  for (const ScoreBreakdown& b : result.scores.ranked) {
    ojson row;
    row["rank"] = rank++;
    row["id"] = b.hypothesis_id;
    row["tokens"] = b.length;
    row["program_tokens"] = b.program_length;
    row["simplicity"] = b.simplicity;
    row["accuracy"] = b.accuracy;
    row["raw_score"] = b.raw_score;
    row["solomonoff_weight"] = b.solomonoff_weight;
    row["bma_log_likelihood"] = b.bma_log_likelihood;
    row["bma_weight"] = b.bma_weight;
    row["cells_correct"] = b.cells_correct;
    row["cells_total"] = b.cells_total;
    rows.push_back(std::move(row));
  }
  return rows;
}

ojson split_to_json(const EvaluationResult& result) {
  ojson j;
  j["mode"] = split_mode_name(result.config.split);
  j["train_count"] = result.train_count;
  j["held_out_index"] = result.held_out_index;
  j["held_out_withheld"] = result.held_out_withheld;
  return j;
}

ojson method_to_json(const EvaluationResult& result, const MethodResult& m) {
  ojson j;
  j["ranking_by_weight"] = m.ranking_ids;
  j["weight_entropy"] = m.weight_entropy;
  j["max_weight"] = m.max_weight;
  j["mean_confidence"] = m.mean_confidence;
  j["mean_entropy"] = m.mean_entropy;
  if (m.top1_accuracy_all)
    j["top1_accuracy_all"] = *m.top1_accuracy_all;
  else
    j["top1_accuracy_all"] = nullptr;
  if (m.top1_accuracy_nonbg)
    j["top1_accuracy_nonbg"] = *m.top1_accuracy_nonbg;
  else
    j["top1_accuracy_nonbg"] = nullptr;
  if (result.held_out_output)
    j["brier"] = brier_score(m.matrix, *result.held_out_output);
  else
    j["brier"] = nullptr;
  j["prediction"] = grid_to_json(m.prediction);
  j["confidence"] =
      map_to_json(confidence_map(m.matrix), m.matrix.rows, m.matrix.cols);
  j["entropy"] =
      map_to_json(entropy_map(m.matrix), m.matrix.rows, m.matrix.cols);
  j["matrix"] = matrix_to_json(m.matrix);
  return j;
}

ojson header_json(const EvaluationResult& result, const RunConfig& config,
                  const std::string& pool_hash, const char* schema) {
  ojson j;
  j["schema"] = schema;
  j["task_id"] = result.task_id;
  j["config"] = run_config_to_json(config);
  j["pool_hash"] = pool_hash;
  j["pool_size"] = result.pool_size;
  j["split"] = split_to_json(result);
  j["warnings"] = result.warnings;
  return j;
}

}  // namespace

ojson scores_to_json(const EvaluationResult& result, const RunConfig& config,
                     const std::string& pool_hash) {
  ojson j = header_json(result, config, pool_hash, "occamix.scores.v1");
  j["degenerate_uniform"] = result.scores.degenerate_uniform;
  j["ranking"] = ranking_to_json(result);
  return j;
}

ojson result_to_json(const EvaluationResult& result, const RunConfig& config,
                     const std::string& pool_hash) {
  ojson j = header_json(result, config, pool_hash, "occamix.result.v1");
  j["degenerate_uniform"] = result.scores.degenerate_uniform;
  j["ranking"] = ranking_to_json(result);
  ojson held;
  held["input"] = grid_to_json(result.held_out_input);
  if (result.held_out_output)
    held["output"] = grid_to_json(*result.held_out_output);
  else
    held["output"] = nullptr;
  j["held_out"] = std::move(held);
  ojson methods;
  methods["solomonoff"] = method_to_json(result, result.solomonoff);
  methods["bma"] = method_to_json(result, result.bma);
  j["methods"] = std::move(methods);
  return j;
}

// ------------------------------------------------------------- rendering

namespace {

std::string config_line(const ojson& config) {
  std::string out = "policy=" + config.at("policy").get<std::string>();
  out += " epsilon=" + fmt6(config.at("epsilon").get<double>());
  out += " delta=" + fmt6(config.at("delta").get<double>());
  out += " connectivity=" + config.at("connectivity").get<std::string>();
  out += " split=" + config.at("split").get<std::string>();
  return out;
}

std::string ranking_table(const ojson& ranking) {
  std::string md;
  md +=
      "| Rank | Id | Tokens | Simplicity | Accuracy | Score | Solomonoff "
      "Weight | BMA Weight |\n";
  md += "|---|---|---|---|---|---|---|---|\n";
  for (const auto& row : ranking) {
    md += "| " + std::to_string(row.at("rank").get<int>());
    md += " | " + row.at("id").get<std::string>();
    md += " | " + std::to_string(row.at("tokens").get<int>());
    md += " | " + fmt6(row.at("simplicity").get<double>());
    md += " | " + fmt6(row.at("accuracy").get<double>());
    md += " | " + fmt6(row.at("raw_score").get<double>());
    md += " | " + fmt6(row.at("solomonoff_weight").get<double>());
    md += " | " + fmt6(row.at("bma_weight").get<double>());
    md += " |\n";
  }
  return md;
}

std::string grid_block(const ojson& rows) {
  std::string out = "```\n";
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ' ';
      out += std::to_string(row[c].get<int>());
    }
    out += '\n';
  }
  out += "```\n";
  return out;
}

std::string opt_metric(const ojson& method, const char* key) {
  return method.at(key).is_null() ? std::string("n/a")
                                  : fmt6(method.at(key).get<double>());
}

std::string method_section(const ojson& result, const std::string& name,
                           const std::string& title) {
  const ojson& m = result.at("methods").at(name);
  std::string md = "## " + title + "\n\n";
  md += "prediction:\n\n" + grid_block(m.at("prediction")) + "\n";
  md += "| metric | value |\n|---|---|\n";
  md += "| top-1 accuracy (all cells) | " + opt_metric(m, "top1_accuracy_all") +
        " |\n";
  md += "| top-1 accuracy (non-background) | " +
        opt_metric(m, "top1_accuracy_nonbg") + " |\n";
  md += "| mean confidence | " + fmt6(m.at("mean_confidence").get<double>()) +
        " |\n";
  md += "| mean cell entropy | " + fmt6(m.at("mean_entropy").get<double>()) +
        " |\n";
  md += "| weight entropy | " + fmt6(m.at("weight_entropy").get<double>()) +
        " |\n";
  md += "| max weight | " + fmt6(m.at("max_weight").get<double>()) + " |\n";
  md += "| Brier score | " + opt_metric(m, "brier") + " |\n";
  return md;
}

// Full config echo so the markdown is self-describing like the JSON.
std::string config_comment(const ojson& doc) {
  ojson echo;
  echo["config"] = doc.at("config");
  if (doc.contains("pool_hash")) echo["pool_hash"] = doc.at("pool_hash");
  return "<!-- " + echo.dump() + " -->\n";
}

std::string report_header(const ojson& doc, const std::string& what) {
  std::string md = config_comment(doc);
  md += "# " + doc.at("task_id").get<std::string>() + " — " + what + "\n\n";
  md += "- config: `" + config_line(doc.at("config")) + "`\n";
  md += "- pool: `" + doc.at("pool_hash").get<std::string>() + "` (" +
        std::to_string(doc.at("pool_size").get<int>()) + " hypotheses)\n";
  const auto& split = doc.at("split");
  md += "- split: " + split.at("mode").get<std::string>() + ", " +
        std::to_string(split.at("train_count").get<int>()) +
        " training examples, held-out index " +
        std::to_string(split.at("held_out_index").get<int>()) + "\n";
  if (!doc.at("warnings").empty()) {
    md += "- warnings:\n";
    for (const auto& w : doc.at("warnings"))
      md += "  - " + w.get<std::string>() + "\n";
  }
  md += "\n";
  return md;
}

}  // namespace

std::string scores_markdown(const ojson& scores_json) {
  std::string md = report_header(scores_json, "ranked hypotheses");
  md += ranking_table(scores_json.at("ranking"));
  return md;
}

std::string result_markdown(const ojson& result_json) {
  std::string md = report_header(result_json, "prediction report");
  md += "## Ranked hypotheses\n\n";
  md += ranking_table(result_json.at("ranking"));
  md += "\n";
  md += method_section(result_json, "solomonoff", "Solomonoff mixture");
  md += "\n";
  md += method_section(result_json, "bma", "BMA mixture");
  if (!result_json.at("held_out").at("output").is_null()) {
    md += "\n## Held-out truth\n\n";
    md += grid_block(result_json.at("held_out").at("output"));
  }
  return md;
}

std::string heatmap_svg(const ojson& result_json, const std::string& method) {
  const ojson& m = result_json.at("methods").at(method);
  const ojson& prediction = m.at("prediction");
  const ojson& confidence = m.at("confidence");
  const int rows = static_cast<int>(prediction.size());
  const int cols = static_cast<int>(prediction.at(0).size());
  constexpr int kCell = 48, kPad = 8;
  const int width = cols * kCell + 2 * kPad;
  const int height = rows * kCell + 2 * kPad;

  char buf[512];
  std::string svg;
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                "height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                width, height, width, height);
  svg += buf;
  // Self-describing artifact: config echo and pool hash ride along.
  ojson desc;
  desc["task_id"] = result_json.at("task_id");
  desc["method"] = method;
  desc["config"] = result_json.at("config");
  desc["pool_hash"] = result_json.at("pool_hash");
  svg += "<desc>" + dump_fixed(desc) + "</desc>\n";
  std::snprintf(buf, sizeof(buf),
                "<rect width=\"%d\" height=\"%d\" fill=\"#1b1b1b\"/>\n", width,
                height);
  svg += buf;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int value = prediction.at(r).at(c).get<int>();
      const double conf = confidence.at(r).at(c).get<double>();
      const int x = kPad + c * kCell, y = kPad + r * kCell;
      std::snprintf(buf, sizeof(buf),
                    "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" "
                    "fill=\"%s\" fill-opacity=\"%s\" stroke=\"#666666\" "
                    "stroke-width=\"1\"/>\n",
                    x, y, kCell, kCell, kArcPalette[value],
                    fmt6(conf).c_str());
      svg += buf;
      std::snprintf(buf, sizeof(buf),
                    "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\" "
                    "dominant-baseline=\"central\" font-family=\"monospace\" "
                    "font-size=\"12\" fill=\"#ffffff\" stroke=\"#000000\" "
                    "stroke-width=\"0.4\">%.2f</text>\n",
                    x + kCell / 2, y + kCell / 2, conf);
      svg += buf;
    }
  }
  svg += "</svg>\n";
  return svg;
}

// ---------------------------------------------------------------- compare

ojson compare_entry(const ojson& result_json) {
  ojson entry;
  entry["task_id"] = result_json.at("task_id");
  entry["status"] = "ok";
  entry["pool_hash"] = result_json.at("pool_hash");
  entry["pool_size"] = result_json.at("pool_size");
  for (const char* method : {"solomonoff", "bma"}) {
    const ojson& m = result_json.at("methods").at(method);
    ojson s;
    s["top1_accuracy_all"] = m.at("top1_accuracy_all");
    s["top1_accuracy_nonbg"] = m.at("top1_accuracy_nonbg");
    s["mean_confidence"] = m.at("mean_confidence");
    s["mean_entropy"] = m.at("mean_entropy");
    s["weight_entropy"] = m.at("weight_entropy");
    s["max_weight"] = m.at("max_weight");
    s["brier"] = m.at("brier");
    entry[method] = std::move(s);
  }
  return entry;
}

ojson compare_to_json(const std::vector<ojson>& task_entries,
                      const RunConfig& config) {
  ojson j;
  j["schema"] = "occamix.compare.v1";
  j["config"] = run_config_to_json(config);
  j["tasks"] = task_entries;

  ojson aggregate;
  for (const char* method : {"solomonoff", "bma"}) {
    double top1 = 0.0, max_w = 0.0, w_entropy = 0.0, brier = 0.0;
    int n = 0, n_top1 = 0, n_brier = 0;
    for (const auto& entry : task_entries) {
      if (entry.at("status") != "ok") continue;
      const auto& m = entry.at(method);
      ++n;
      max_w += m.at("max_weight").get<double>();
      w_entropy += m.at("weight_entropy").get<double>();
      if (!m.at("top1_accuracy_all").is_null()) {
        top1 += m.at("top1_accuracy_all").get<double>();
        ++n_top1;
      }
      if (!m.at("brier").is_null()) {
        brier += m.at("brier").get<double>();
        ++n_brier;
      }
    }
    ojson s;
    s["tasks"] = n;
    s["mean_top1_accuracy_all"] =
        n_top1 ? ojson(top1 / n_top1) : ojson(nullptr);
    s["mean_max_weight"] = n ? ojson(max_w / n) : ojson(nullptr);
    s["mean_weight_entropy"] = n ? ojson(w_entropy / n) : ojson(nullptr);
    s["mean_brier"] = n_brier ? ojson(brier / n_brier) : ojson(nullptr);
    aggregate[method] = std::move(s);
  }
  j["aggregate"] = std::move(aggregate);
  return j;
}

std::string compare_markdown(const ojson& compare_json) {
  std::string md = config_comment(compare_json);
  md += "# Method comparison\n\n";
  md += "- config: `" + config_line(compare_json.at("config")) + "`\n";
  md += "- pools:\n";
  for (const auto& entry : compare_json.at("tasks"))
    if (entry.at("status") == "ok")
      md += "  - " + entry.at("task_id").get<std::string>() + ": `" +
            entry.at("pool_hash").get<std::string>() + "`\n";
  md += "\n## Per task\n\n";
  md +=
      "| Task | Method | Top-1 (all) | Mean confidence | Weight entropy | "
      "Max weight | Brier |\n|---|---|---|---|---|---|---|\n";
  for (const auto& entry : compare_json.at("tasks")) {
    const std::string task = entry.at("task_id").get<std::string>();
    if (entry.at("status") != "ok") {
      md += "| " + task + " | — | error: " +
            entry.at("error").get<std::string>() + " | | | | |\n";
      continue;
    }
    for (const char* method : {"solomonoff", "bma"}) {
      const auto& m = entry.at(method);
      md += "| " + task + " | " + method;
      md += " | " + opt_metric(m, "top1_accuracy_all");
      md += " | " + fmt6(m.at("mean_confidence").get<double>());
      md += " | " + fmt6(m.at("weight_entropy").get<double>());
      md += " | " + fmt6(m.at("max_weight").get<double>());
      md += " | " + opt_metric(m, "brier");
      md += " |\n";
    }
  }
  md += "\n## Aggregate\n\n";
  md +=
      "| Method | Tasks | Mean top-1 (all) | Mean max weight | Mean weight "
      "entropy | Mean Brier |\n|---|---|---|---|---|---|\n";
  for (const char* method : {"solomonoff", "bma"}) {
    const auto& s = compare_json.at("aggregate").at(method);
    md += std::string("| ") + method;
    md += " | " + std::to_string(s.at("tasks").get<int>());
    md += " | " + opt_metric(s, "mean_top1_accuracy_all");
    md += " | " + opt_metric(s, "mean_max_weight");
    md += " | " + opt_metric(s, "mean_weight_entropy");
    md += " | " + opt_metric(s, "mean_brier");
    md += " |\n";
  }
  return md;
}

}  // namespace occamix
