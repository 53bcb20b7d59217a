#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "gridbench/board.hpp"
#include "gridbench/errors.hpp"
#include "gridbench/expected.hpp"
#include "gridbench/lang/interpreter.hpp"
#include "gridbench/lang/validate.hpp"
#include "gridbench/llm/provider.hpp"
#include "gridbench/protocol/prompt.hpp"
#include "gridbench/protocol/response.hpp"
#include "gridbench/protocol/task.hpp"

namespace gridbench::protocol {

inline constexpr const char* kEpisodeSchema = "gridbench.episode/1";

struct Verdict {
  enum class Kind { Abort, ExecError, Executed };

  Kind kind = Kind::Abort;
  AbortReason reason = AbortReason::MissingLabel;        // Abort
  ErrorCategory category = ErrorCategory::ValueError;   // ExecError
  bool matched = false;                                 // Executed
  std::size_t diff_count = 0;                           // Executed
  std::string detail;

  static Verdict abort(AbortReason r, std::string detail = {});
  static Verdict exec_error(ErrorCategory c, std::string detail = {});
  static Verdict executed(std::size_t diffs);

  nlohmann::json to_json() const;
  static Expected<Verdict, std::string> from_json(const nlohmann::json& j);

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

std::string_view to_string(Verdict::Kind k) noexcept;

struct EpisodeRecord {
  std::string task_id;
  std::string model;
  std::string style;  // "fd" | "fsg" | "fsc"; simple boards always "fd"
  int shots = 0;
  std::string prompt;
  std::string prompt_sha256;
  std::vector<std::string> responses;  // one per turn
  Verdict verdict;
  std::int64_t latency_ms = 0;
  std::string board_type;
  std::string instruction_type;
  std::string domain = "blocks";
  int n_shapes = 0;

  /// JSONL line. `response` is a string for single-turn episodes and a list
  /// otherwise; `prompt` itself is not logged, only its hash.
  nlohmann::json to_json() const;
  static Expected<EpisodeRecord, std::string> from_json(const nlohmann::json& j);
};

struct EpisodeOptions {
  PromptStyle style;
  bool strict = true;
  std::uint64_t seed = 0;
  lang::ExecBudget budget;
  const std::vector<TaskInstance>* shot_pool = nullptr;
};

/// Parse, validate, execute and compare an answer against a gold board.
Verdict score_code(const std::string& code, lang::ValidationMode mode,
                   const lang::ComboTable& combos, const Board& gold,
                   const lang::ExecBudget& budget = {});

/// Scores a board produced elsewhere; used by adapters sharing the pipeline.
Verdict verdict_from_validation(const lang::ConstraintViolation& v);

/// One programmer -> cobot interaction. Execution happens once after all turns.
EpisodeRecord run_episode(const TaskInstance& task, const EpisodeOptions& options,
                          llm::ChatProvider& model);

}  // namespace gridbench::protocol
