#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "occamix/dsl.hpp"
#include "occamix/tasks.hpp"

namespace occamix {

// Bumping this invalidates every cache entry by construction.
inline constexpr const char* kPromptVersion = "occamix-prompt-v1";

struct RemoteSource {
  std::string endpoint_url;  // e.g. http://host:port/v1/chat/completions
  std::string model_name = "gpt-4";
  int n = 6;                 // hypotheses requested per task
  int max_attempts = 3;      // transport errors and 5xx are retried
};

// Strict pool file loading: JSON array of
// {"id","description","sub_hypotheses","program"}; duplicate ids and
// unparseable programs are errors.
std::vector<Hypothesis> load_pool(const std::string& path);
std::vector<Hypothesis> pool_from_json(const nlohmann::json& doc);
ojson pool_to_json(const std::vector<Hypothesis>& pool);

// Content hash over ids, texts and canonical programs ("sha256:<hex>").
std::string pool_content_hash(const std::vector<Hypothesis>& pool);

std::string sha256_hex(std::string_view data);

// Built-in deterministic pools mirroring the bundled fixture files.
// Known ids: task_a_6, task_b_6, task_c_20, clean_single,
// degenerate_equal_length.
std::vector<Hypothesis> scripted_pool(const std::string& fixture_id);
std::vector<std::string> scripted_pool_ids();

// The task each scripted pool is designed against.
TaskBundle scripted_task(const std::string& fixture_id);

// Append-only directory of JSON files named by request-key hash.
class ResponseCache {
public:
  explicit ResponseCache(std::filesystem::path dir);

  static std::string make_key(const std::string& objects_text,
                              const std::string& prompt_version,
                              const std::string& model_name, int n);

  std::optional<std::string> lookup(const std::string& key) const;
  void store(const std::string& key, const std::string& response,
             const ojson& request_echo);

  const std::filesystem::path& dir() const { return dir_; }

private:
  std::filesystem::path dir_;
};

// The serialized-object prompt sent to the chat endpoint.
std::string build_prompt(const TaskBundle& task, Connectivity conn, int n);
std::string serialize_training_objects(const TaskBundle& task,
                                       Connectivity conn);

// Parses a model response (optionally fenced) into hypotheses; malformed
// records are skipped with warnings. Throws AllRecordsMalformed when none
// survive.
std::vector<Hypothesis> parse_response_pool(const std::string& response_text,
                                            std::vector<std::string>* warnings);

// Cache-first fetch: on a hit the network is never touched. `api_key` may
// be empty for unauthenticated endpoints.
std::vector<Hypothesis> fetch_remote_pool(const TaskBundle& task,
                                          const RemoteSource& source,
                                          ResponseCache& cache,
                                          Connectivity conn,
                                          const std::string& api_key,
                                          std::vector<std::string>* warnings);

}  // namespace occamix
