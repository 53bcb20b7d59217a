#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "gridbench/adapters/adapters.hpp"
#include "gridbench/expected.hpp"
#include "gridbench/llm/provider.hpp"
#include "gridbench/metrics/metrics.hpp"
#include "gridbench/protocol/episode.hpp"

namespace gridbench::service {

inline constexpr const char* kManifestSchema = "gridbench.run/1";
inline constexpr const char* kIncompleteMarker = "INCOMPLETE";

/// Everything that determines an evaluation run. With a scripted provider two
/// runs from the same manifest produce the same logs apart from latencies.
struct RunManifest {
  std::string run_id;  // derived from the other fields when empty
  std::vector<std::string> datasets;
  /// Either a provider config or {"mock": "@gold" | "@prose" | <script path>}.
  nlohmann::json model_config = nlohmann::json::object();
  protocol::PromptStyle style;
  std::optional<std::string> shot_pool;
  std::uint64_t seed = 0;
  bool strict = true;
  std::string out_dir;
  lang::ExecBudget budget;

  std::string derived_id() const;
  nlohmann::json to_json() const;
  static Expected<RunManifest, std::string> from_json(const nlohmann::json& j);
};

/// Tasks of one run; blocks and adapter datasets may be mixed.
struct TaskSet {
  std::vector<protocol::TaskInstance> blocks;
  std::vector<adapters::AdapterTask> adapters;

  std::vector<std::string> ids() const;
  std::size_t size() const { return blocks.size() + adapters.size(); }
};

/// Loads JSONL files, picking the reader from the first record's `domain`.
Expected<TaskSet, std::string> load_tasks(const std::vector<std::string>& paths);

/// Builds the chat provider a manifest names. Script mocks must cover every
/// task id, otherwise this fails before any request is made.
Expected<std::shared_ptr<llm::ChatProvider>, std::string> make_provider(
    const RunManifest& manifest, const TaskSet& tasks);

struct RunResult {
  std::vector<protocol::EpisodeRecord> records;
  metrics::MetricReport overall;
  bool complete = true;
  std::vector<std::string> notices;
};

/// Runs every episode and writes manifest.json, episodes.jsonl and the
/// reports into `manifest.out_dir`. An INCOMPLETE marker exists while the run
/// is in progress and stays behind if any episode lost its provider.
Expected<RunResult, std::string> evaluate(const RunManifest& manifest, llm::ChatProvider& model,
                                          int parallelism = 1);

Expected<std::vector<protocol::EpisodeRecord>, std::string> read_episode_log(
    const std::string& path);

struct ReportOptions {
  std::string row_key = "model";
  std::vector<std::string> group_by = {"board_type", "instruction_type"};
};

/// Rendered report files keyed by file name.
struct ReportBundle {
  std::map<std::string, std::string> files;
  std::vector<std::string> notices;
};

Expected<ReportBundle, std::string> build_reports(
    const std::vector<protocol::EpisodeRecord>& records, const ReportOptions& options = {});

Expected<std::vector<metrics::SimilarityPair>, std::string> read_similarity_pairs(
    const std::string& path);

Expected<std::string, std::string> write_file(const std::string& path, const std::string& content);

}  // namespace gridbench::service
