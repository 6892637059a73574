#include "occamix/provider.hpp"

#include <openssl/evp.h>

#include <httplib.h>

#include <map>
#include <memory>
#include <mutex>
#include <set>

namespace occamix {

// ------------------------------------------------------------- pool files

namespace {

Hypothesis hypothesis_from_record(const nlohmann::json& record) {
  if (!record.is_object())
    throw Error(ErrorCode::SchemaError, "hypothesis record must be an object");
  for (const char* key : {"id", "description", "program"})
    if (!record.contains(key) || !record.at(key).is_string())
      throw Error(ErrorCode::SchemaError,
                  std::string("hypothesis record needs string field '") + key +
                      "'");
  std::vector<std::string> subs;
  if (record.contains("sub_hypotheses")) {
    if (!record.at("sub_hypotheses").is_array())
      throw Error(ErrorCode::SchemaError, "sub_hypotheses must be an array");
    for (const auto& s : record.at("sub_hypotheses")) {
      if (!s.is_string())
        throw Error(ErrorCode::SchemaError,
                    "sub_hypotheses entries must be strings");
      subs.push_back(s.get<std::string>());
    }
  }
  return make_hypothesis(record.at("id").get<std::string>(),
                         record.at("description").get<std::string>(),
                         std::move(subs),
                         record.at("program").get<std::string>());
}

}  // namespace

std::vector<Hypothesis> pool_from_json(const nlohmann::json& doc) {
  if (!doc.is_array())
    throw Error(ErrorCode::SchemaError, "pool must be a JSON array");
  if (doc.empty()) throw Error(ErrorCode::EmptyPool, "pool file has no records");
  std::vector<Hypothesis> pool;
  std::set<std::string> ids;
  for (const auto& record : doc) {
    Hypothesis h = hypothesis_from_record(record);
    if (!ids.insert(h.id).second)
      throw Error(ErrorCode::DuplicateId, "duplicate hypothesis id '" + h.id + "'");
    pool.push_back(std::move(h));
  }
  return pool;
}

std::vector<Hypothesis> load_pool(const std::string& path) {
  const std::string text = read_text_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaError,
                "'" + path + "' is not valid JSON: " + e.what());
  }
  return pool_from_json(doc);
}

ojson pool_to_json(const std::vector<Hypothesis>& pool) {
  ojson doc = ojson::array();
  for (const auto& h : pool) {
    ojson record;
    record["id"] = h.id;
    record["description"] = h.description;
    record["sub_hypotheses"] = h.sub_hypotheses;
    record["program"] = h.program_text;
    doc.push_back(std::move(record));
  }
  return doc;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string pool_content_hash(const std::vector<Hypothesis>& pool) {
  return "sha256:" + sha256_hex(pool_to_json(pool).dump());
}

// -------------------------------------------------------------- fixtures

namespace {

struct CellSpec {
  int r, c, v;
};

Grid grid_with(int rows, int cols, std::initializer_list<CellSpec> cells) {
  Grid g(rows, cols);
  for (const auto& s : cells) g.set(s.r, s.c, static_cast<CellValue>(s.v));
  return g;
}

// A plus shape of `color` centered at (r, c).
Grid cross_grid(int r, int c, int color) {
  return grid_with(5, 5,
                   {{r - 1, c, color},
                    {r, c - 1, color},
                    {r, c, color},
                    {r, c + 1, color},
                    {r + 1, c, color}});
}

TaskBundle alternating_shift_task_a() {
  TaskBundle t;
  t.task_id = "task_a";
  t.train = {
      {grid_with(5, 5, {{2, 0, 3}, {2, 3, 7}}),
       grid_with(5, 5, {{1, 0, 3}, {3, 3, 7}})},
      {grid_with(5, 5, {{1, 1, 2}, {3, 2, 4}}),
       grid_with(5, 5, {{2, 1, 2}, {2, 2, 4}})},
      {grid_with(5, 5, {{1, 0, 1}, {2, 2, 6}, {2, 4, 8}}),
       grid_with(5, 5, {{0, 0, 1}, {1, 2, 6}, {1, 4, 8}})},
  };
  t.test = {{grid_with(5, 5, {{2, 1, 9}, {2, 2, 3}}),
             grid_with(5, 5, {{3, 1, 9}, {1, 2, 3}}), false}};
  return t;
}

TaskBundle centralisation_task_b() {
  TaskBundle t;
  t.task_id = "task_b";
  t.train = {
      {cross_grid(1, 1, 4), cross_grid(2, 2, 4)},
      {cross_grid(3, 3, 2), cross_grid(2, 2, 2)},
      {cross_grid(1, 3, 6), cross_grid(2, 2, 6)},
  };
  t.test = {{cross_grid(3, 1, 8), cross_grid(2, 2, 8), false}};
  return t;
}

TaskBundle alternating_shift_task_c() {
  TaskBundle t;
  t.task_id = "task_c";
  t.train = {
      {grid_with(5, 5, {{2, 0, 5}, {2, 1, 6}}),
       grid_with(5, 5, {{1, 0, 5}, {3, 1, 6}})},
      {grid_with(5, 5, {{1, 2, 2}, {3, 3, 9}}),
       grid_with(5, 5, {{0, 2, 2}, {4, 3, 9}})},
      {grid_with(5, 5, {{2, 4, 4}, {1, 1, 7}}),
       grid_with(5, 5, {{1, 4, 4}, {2, 1, 7}})},
      {grid_with(5, 5, {{3, 0, 8}, {2, 3, 1}}),
       grid_with(5, 5, {{2, 0, 8}, {3, 3, 1}})},
  };
  t.test = {{grid_with(5, 5, {{2, 2, 6}, {3, 1, 4}}),
             grid_with(5, 5, {{1, 2, 6}, {4, 1, 4}}), false}};
  return t;
}

Hypothesis hyp(const char* id, const char* description,
               std::vector<std::string> subs, const char* program) {
  return make_hypothesis(id, description, std::move(subs), program);
}

std::vector<Hypothesis> pool_task_a_6() {
  return {
      hyp("a1",
          "Different cells replicate vertically while maintaining column "
          "locations.",
          {}, "replicate_vertical(direction=both, until=edge)"),
      hyp("a2", "Objects propagate vertically until blocked.", {},
          "replicate_vertical(direction=both, until=blocked)"),
      hyp("a3", "Objects duplicated vertically across grid height.", {},
          "fill_column"),
      hyp("a4", "Objects expand vertically to top while preserving column.",
          {}, "replicate_vertical(direction=up, until=edge)"),
      hyp("a5", "Objects duplicated from top to bottom across grid.", {},
          "replicate_vertical(direction=down, until=edge)"),
      hyp("a6",
          "Objects translated vertically, repeating in straight lines below "
          "their origin.",
          {}, "duplicate_offset(dx=0, dy=1)"),
  };
}

std::vector<Hypothesis> pool_task_b_6() {
  return {
      hyp("b1", "Objects moved to grid center.", {}, "move_to_center"),
      hyp("b2", "Cross-shaped clusters repositioned to grid center.",
          {"A copy appears offset toward the lower right corner."},
          "move_to_center; duplicate_offset(dx=2, dy=2)"),
      hyp("b3", "Objects move toward center, shape and color preserved.",
          {"An echo of the shape is left two cells up and left."},
          "move_to_center; duplicate_offset(dx=-2, dy=-2)"),
      hyp("b4", "Objects recentered then nudged one row down.", {},
          "move_to_center; translate(dx=0, dy=1)"),
      hyp("b5", "Object shifts diagonally toward bottom right.", {},
          "translate(dx=1, dy=1)"),
      hyp("b6",
          "Every object is relocated so that the center of its bounding box "
          "coincides exactly with the central cell of the five by five grid, "
          "while the original cell colors and overall shape are preserved "
          "without any modification, and one stray copy of the shape is "
          "painted two rows beneath the centered position.",
          {}, "move_to_center; duplicate_offset(dx=0, dy=2)"),
  };
}

std::vector<Hypothesis> pool_task_c_20() {
  return {
      hyp("c01", "Objects replicated vertically in the output grid.", {},
          "replicate_vertical(direction=both, until=edge)"),
      hyp("c02", "Objects propagate vertically up and down until blocked.",
          {}, "replicate_vertical(direction=both, until=blocked)"),
      hyp("c03", "Objects fill columns top to bottom.", {}, "fill_column"),
      hyp("c04", "Colored objects expand upward to the top edge.", {},
          "replicate_vertical(direction=up, until=edge)"),
      hyp("c05", "Objects duplicated downward until the bottom.", {},
          "replicate_vertical(direction=down, until=edge)"),
      hyp("c06", "Objects stretch downward; overlaps overwrite.", {},
          "duplicate_offset(dx=0, dy=1)"),
      hyp("c07", "Objects stretch upward, keeping the original cells.", {},
          "duplicate_offset(dx=0, dy=-1)"),
      hyp("c08", "Objects copied two rows beneath their origin.", {},
          "duplicate_offset(dx=0, dy=2)"),
      hyp("c09", "Every object shifts down one row.", {},
          "translate(dx=0, dy=1)"),
      hyp("c10", "Every object shifts up one row.", {},
          "translate(dx=0, dy=-1)"),
      hyp("c11", "Even columns replicate vertically across the whole grid.",
          {},
          "per_column(parity=even, inner=replicate_vertical(direction=both, "
          "until=edge))"),
      hyp("c12", "Odd columns replicate vertically across the whole grid.",
          {},
          "per_column(parity=odd, inner=replicate_vertical(direction=both, "
          "until=edge))"),
      hyp("c13",
          "Even columns rise one row while odd columns smear downward.", {},
          "per_column(parity=even, inner=translate(dx=0, dy=-1)); "
          "per_column(parity=odd, inner=duplicate_offset(dx=0, dy=1))"),
      hyp("c14", "Cells in even columns move up one row.", {},
          "per_column(parity=even, inner=translate(dx=0, dy=-1))"),
      hyp("c15", "Cells in odd columns move down one row.", {},
          "per_column(parity=odd, inner=translate(dx=0, dy=1))"),
      hyp("c16", "Colored cells expand upward until blocked.", {},
          "replicate_vertical(direction=up, until=blocked)"),
      hyp("c17", "Colored cells expand downward until blocked.", {},
          "replicate_vertical(direction=down, until=blocked)"),
      hyp("c18", "The grid flips top to bottom.", {}, "reflect(axis=h)"),
      hyp("c19", "The grid rotates half a turn.", {},
          "rotate(quarter_turns=2)"),
      hyp("c20", "Each object gains a copy one column to the right.", {},
          "duplicate_offset(dx=1, dy=0)"),
  };
}

std::vector<Hypothesis> pool_clean_single() {
  return {
      hyp("s1", "Odd columns shift down while even columns shift up.", {},
          "per_column(parity=even, inner=translate(dx=0, dy=-1)); "
          "per_column(parity=odd, inner=translate(dx=0, dy=1))"),
  };
}

std::vector<Hypothesis> pool_degenerate_equal_length() {
  return {
      hyp("d1", "Every cell slides one row down.", {},
          "translate(dx=0, dy=1)"),
      hyp("d2", "Every cell slides one row up.", {},
          "translate(dx=0, dy=-1)"),
      hyp("d3", "Every cell copies one row down.", {},
          "duplicate_offset(dx=0, dy=1)"),
  };
}

}  // namespace

std::vector<std::string> scripted_pool_ids() {
  return {"task_a_6", "task_b_6", "task_c_20", "clean_single",
          "degenerate_equal_length"};
}

std::vector<Hypothesis> scripted_pool(const std::string& fixture_id) {
  if (fixture_id == "task_a_6") return pool_task_a_6();
  if (fixture_id == "task_b_6") return pool_task_b_6();
  if (fixture_id == "task_c_20") return pool_task_c_20();
  if (fixture_id == "clean_single") return pool_clean_single();
  if (fixture_id == "degenerate_equal_length")
    return pool_degenerate_equal_length();
  throw Error(ErrorCode::UnknownFixture,
              "unknown fixture '" + fixture_id + "'");
}

TaskBundle scripted_task(const std::string& fixture_id) {
  if (fixture_id == "task_a_6" || fixture_id == "clean_single" ||
      fixture_id == "degenerate_equal_length")
    return alternating_shift_task_a();
  if (fixture_id == "task_b_6") return centralisation_task_b();
  if (fixture_id == "task_c_20") return alternating_shift_task_c();
  throw Error(ErrorCode::UnknownFixture,
              "unknown fixture '" + fixture_id + "'");
}

// ----------------------------------------------------------------- cache

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
}

std::string ResponseCache::make_key(const std::string& objects_text,
                                    const std::string& prompt_version,
                                    const std::string& model_name, int n) {
  ojson material;
  material["objects_text"] = objects_text;
  material["prompt_version"] = prompt_version;
  material["model_name"] = model_name;
  material["n"] = n;
  return sha256_hex(material.dump());
}

std::optional<std::string> ResponseCache::lookup(const std::string& key) const {
  const auto path = dir_ / (key + ".json");
  if (!std::filesystem::exists(path)) return std::nullopt;
  const nlohmann::json entry = nlohmann::json::parse(read_text_file(path.string()));
  if (!entry.contains("response") || !entry.at("response").is_string())
    return std::nullopt;
  return entry.at("response").get<std::string>();
}

void ResponseCache::store(const std::string& key, const std::string& response,
                          const ojson& request_echo) {
  const auto path = dir_ / (key + ".json");
  if (std::filesystem::exists(path)) return;  // entries are immutable
  ojson entry;
  entry["key"] = key;
  entry["request"] = request_echo;
  entry["response"] = response;
  entry["timestamp"] = static_cast<long long>(std::time(nullptr));
  // Write-then-rename keeps concurrent readers off partial files.
  const auto tmp = dir_ / (key + ".tmp");
  write_text_file(tmp.string(), entry.dump(2) + "\n");
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
}

// ---------------------------------------------------------------- remote

std::string serialize_training_objects(const TaskBundle& task,
                                       Connectivity conn) {
  std::string out;
  for (size_t i = 0; i < task.train.size(); ++i) {
    out += "example " + std::to_string(i + 1) + " input:\n";
    out += serialize_objects(task.train[i].input, conn);
    out += "example " + std::to_string(i + 1) + " output:\n";
    out += serialize_objects(task.train[i].output, conn);
  }
  return out;
}

std::string build_prompt(const TaskBundle& task, Connectivity conn, int n) {
  std::string prompt;
  prompt +=
      "You are given training examples of a grid transformation as object "
      "listings.\n";
  prompt += "Propose " + std::to_string(n) +
            " candidate hypotheses for the transformation.\n";
  prompt +=
      "Reply with a JSON array only; each element must be an object with "
      "fields \"id\", \"description\", \"sub_hypotheses\" (array of "
      "strings) and \"program\".\n";
  prompt +=
      "\"program\" must be written in this DSL (steps joined by ';'):\n"
      "  translate(dx=INT, dy=INT)\n"
      "  duplicate_offset(dx=INT, dy=INT)\n"
      "  replicate_vertical(direction=up|down|both, until=blocked|edge)\n"
      "  move_to_center\n"
      "  rotate(quarter_turns=INT)\n"
      "  reflect(axis=h|v)\n"
      "  recolor(from=INT, to=INT)\n"
      "  per_column(parity=even|odd, inner=TRANSFORM)\n"
      "  per_object(filter=color:INT|size:INT, inner=TRANSFORM)\n"
      "  fill_column\n";
  prompt += "Rows grow downward: dy=1 moves down, dx=1 moves right.\n\n";
  prompt += serialize_training_objects(task, conn);
  return prompt;
}

namespace {

// One in-flight request per cache key; identical concurrent requests
// coalesce on the same mutex.
std::mutex& key_mutex(const std::string& key) {
  static std::mutex registry_mutex;
  static std::map<std::string, std::unique_ptr<std::mutex>> registry;
  std::lock_guard<std::mutex> lock(registry_mutex);
  auto& slot = registry[key];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

struct ParsedUrl {
  std::string base;  // scheme://host[:port]
  std::string path;
};

ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw Error(ErrorCode::ConfigError, "endpoint URL needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string strip_code_fences(const std::string& text) {
  const auto open = text.find("```");
  if (open == std::string::npos) return text;
  auto body_start = text.find('\n', open);
  if (body_start == std::string::npos) return text;
  ++body_start;
  const auto close = text.find("```", body_start);
  if (close == std::string::npos) return text;
  return text.substr(body_start, close - body_start);
}

}  // namespace

std::vector<Hypothesis> parse_response_pool(
    const std::string& response_text, std::vector<std::string>* warnings) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(strip_code_fences(response_text));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::AllRecordsMalformed,
                std::string("response is not valid JSON: ") + e.what());
  }
  if (!doc.is_array())
    throw Error(ErrorCode::AllRecordsMalformed, "response is not a JSON array");
  std::vector<Hypothesis> pool;
  std::set<std::string> ids;
  for (const auto& record : doc) {
    try {
      Hypothesis h = hypothesis_from_record(record);
      if (!ids.insert(h.id).second)
        throw Error(ErrorCode::DuplicateId,
                    "duplicate hypothesis id '" + h.id + "'");
      pool.push_back(std::move(h));
    } catch (const Error& e) {
      if (warnings)
        warnings->push_back(std::string("skipped malformed record: ") +
                            e.what());
    }
  }
  if (pool.empty())
    throw Error(ErrorCode::AllRecordsMalformed,
                "no valid hypothesis record in response");
  return pool;
}

std::vector<Hypothesis> fetch_remote_pool(const TaskBundle& task,
                                          const RemoteSource& source,
                                          ResponseCache& cache,
                                          Connectivity conn,
                                          const std::string& api_key,
                                          std::vector<std::string>* warnings) {
  if (source.n < 1)
    throw Error(ErrorCode::ConfigError, "remote source needs n >= 1");
  const std::string objects_text = serialize_training_objects(task, conn);
  const std::string key = ResponseCache::make_key(
      objects_text, kPromptVersion, source.model_name, source.n);

  std::lock_guard<std::mutex> lock(key_mutex(key));
  if (auto cached = cache.lookup(key))
    return parse_response_pool(*cached, warnings);

  const ParsedUrl url = parse_url(source.endpoint_url);
  ojson request;
  request["model"] = source.model_name;
  request["messages"] = ojson::array();
  request["messages"].push_back(
      {{"role", "system"},
       {"content",
        "You rank grid transformations. Answer with machine-readable JSON "
        "only."}});
  request["messages"].push_back(
      {{"role", "user"}, {"content", build_prompt(task, conn, source.n)}});
  const std::string body = request.dump();

  std::string last_error;
  for (int attempt = 0; attempt < source.max_attempts; ++attempt) {
    httplib::Client client(url.base);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(60, 0);
    httplib::Headers headers;
    if (!api_key.empty())
      headers.emplace("Authorization", "Bearer " + api_key);
    auto res = client.Post(url.path, headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403)
      throw Error(ErrorCode::AuthError,
                  "endpoint rejected credentials (HTTP " +
                      std::to_string(res->status) + ")");
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw Error(ErrorCode::NetworkError,
                  "HTTP " + std::to_string(res->status) + " from endpoint");

    std::string content;
    try {
      const auto doc = nlohmann::json::parse(res->body);
      if (doc.contains("choices") && doc.at("choices").is_array() &&
          !doc.at("choices").empty())
        content = doc.at("choices")[0].at("message").at("content")
                      .get<std::string>();
      else if (doc.contains("content") && doc.at("content").is_string())
        content = doc.at("content").get<std::string>();
      else
        throw Error(ErrorCode::AllRecordsMalformed,
                    "response carries no message content");
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::AllRecordsMalformed,
                  std::string("cannot extract message content: ") + e.what());
    }

    ojson echo;
    echo["endpoint"] = source.endpoint_url;
    echo["model_name"] = source.model_name;
    echo["n"] = source.n;
    echo["prompt_version"] = kPromptVersion;
    cache.store(key, content, echo);
    return parse_response_pool(content, warnings);
  }
  throw Error(ErrorCode::NetworkError,
              "endpoint unreachable after " +
                  std::to_string(source.max_attempts) + " attempts (" +
                  last_error + ")");
}

}  // namespace occamix
