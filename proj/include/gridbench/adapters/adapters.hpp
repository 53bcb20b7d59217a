#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "gridbench/board.hpp"
#include "gridbench/datagen/datagen.hpp"
#include "gridbench/expected.hpp"
#include "gridbench/lang/interpreter.hpp"
#include "gridbench/llm/provider.hpp"
#include "gridbench/protocol/episode.hpp"

namespace gridbench::adapters {

using protocol::EpisodeRecord;
using protocol::Verdict;

enum class Domain { Hexagons, TidyBot };

std::string_view to_string(Domain d) noexcept;
std::optional<Domain> parse_domain(std::string_view s) noexcept;

// ---------------------------------------------------------------- hexagons

/// Drawing grid. Stored rectangularly; hex adjacency never affects scoring.
class HexGrid {
 public:
  static constexpr int kRows = 10;
  static constexpr int kColumns = 18;

  const std::optional<Color>& at(int row, int column) const;
  void set(int row, int column, Color color);
  std::size_t painted() const;

  friend bool operator==(const HexGrid&, const HexGrid&) = default;

 private:
  std::array<std::optional<Color>, kRows * kColumns> cells_{};
};

const std::vector<std::string>& hex_palette();

Expected<HexGrid, lang::BuiltinError> hex_paint(const HexGrid& grid, std::string_view color,
                                                std::int64_t row, std::int64_t column);

struct HexDiff {
  int row = 0;
  int column = 0;
  std::optional<Color> gold;
  std::optional<Color> actual;
};

std::vector<HexDiff> hex_compare(const HexGrid& gold, const HexGrid& actual);

/// {"cells": [{"row", "column", "color"}]} in row-major order.
nlohmann::json hex_to_document(const HexGrid& grid);
Expected<HexGrid, std::string> hex_from_document(const nlohmann::json& doc);

/// Builtin `paint(color, row, column)`.
lang::Builtin make_paint_builtin(HexGrid& grid);

// ---------------------------------------------------------------- tidybot

struct TidyScene {
  std::vector<std::string> objects;
  std::vector<std::string> receptacles;
  std::map<std::string, std::string> placement;  // item -> receptacle

  friend bool operator==(const TidyScene&, const TidyScene&) = default;
};

/// Unique names and placements that reference scene members.
std::optional<std::string> check_scene(const TidyScene& scene);

Expected<TidyScene, lang::BuiltinError> tidy_pick_and_place(const TidyScene& scene,
                                                            std::string_view item,
                                                            std::string_view newposition);

struct TidyDiff {
  std::string item;
  std::optional<std::string> gold;
  std::optional<std::string> actual;
};

std::vector<TidyDiff> tidy_compare(const TidyScene& gold, const TidyScene& actual);

/// {"objects": [...], "receptacles": [...], "placement": {item: receptacle}}
nlohmann::json tidy_to_document(const TidyScene& scene);
Expected<TidyScene, std::string> tidy_from_document(const nlohmann::json& doc);

/// Builtin `pick_and_place(item, newposition)`.
lang::Builtin make_pick_and_place_builtin(TidyScene& scene);

// ---------------------------------------------------------------- tasks

using GoldState = std::variant<HexGrid, TidyScene>;

struct AdapterTask {
  std::string id;
  Domain domain = Domain::Hexagons;
  std::string instruction;
  std::string gold_code;
  /// Final state the gold code produces. For TidyBot it also carries the scene
  /// vocabulary; execution starts from the same scene with nothing placed.
  GoldState gold;
  std::string origin = "fixture";
};

/// Starting state an answer runs against.
GoldState initial_state(const AdapterTask& task);

/// Parses, validates (script mode over the domain builtin) and executes code,
/// returning the final state or a failure verdict.
Expected<GoldState, Verdict> execute_adapter(const AdapterTask& task, const std::string& code,
                                             const lang::ExecBudget& budget = {});

/// Number of differing cells or items between two states of the same domain.
std::size_t state_diff_count(const GoldState& gold, const GoldState& actual);

Verdict score_adapter(const AdapterTask& task, const std::string& code,
                      const lang::ExecBudget& budget = {});

std::string adapter_prompt(const AdapterTask& task);

struct AdapterOptions {
  bool strict = true;
  lang::ExecBudget budget;
};

/// Single-turn episode; the answer uses the "Output:" layout.
EpisodeRecord run_adapter_episode(const AdapterTask& task, const AdapterOptions& options,
                                  llm::ChatProvider& model);

nlohmann::json adapter_task_to_json(const AdapterTask& task);
Expected<AdapterTask, datagen::SchemaError> adapter_task_from_json(const nlohmann::json& j,
                                                                   int line = 0);
Expected<std::vector<AdapterTask>, datagen::SchemaError> read_adapter_dataset(
    const std::string& path);

}  // namespace gridbench::adapters
