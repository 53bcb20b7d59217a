#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "gridbench/board.hpp"
#include "gridbench/expected.hpp"
#include "gridbench/protocol/task.hpp"
#include "gridbench/util.hpp"

namespace gridbench::datagen {

using protocol::BoardType;
using protocol::TaskInstance;

inline constexpr int kMinShapes = 2;
inline constexpr int kMaxShapes = 5;

struct ObjectPart {
  ShapeKind shape;
  Color color;
  int dx = 0;  // row offset from the anchor
  int dy = 0;  // column offset from the anchor
  friend bool operator==(const ObjectPart&, const ObjectPart&) = default;
};

/// Shapes placed in order relative to an anchor; fits a 2x2 footprint.
struct ObjectSpec {
  std::vector<ObjectPart> parts;

  int rows() const;     // footprint height including bridge halves
  int columns() const;  // footprint width including bridge halves
  /// Placements at `anchor` on an empty board succeed.
  bool legal_at(Coord anchor, const Rules& rules = Rules::defaults()) const;
};

/// Random object of n parts built by sequential legal placement.
ObjectSpec random_object(Rng& rng, int n_shapes, const Rules& rules = Rules::defaults());

/// Anchors of a regular layout; a single loop has count 1 on one axis.
struct RegularPattern {
  ObjectSpec object;
  int row_start = 0, row_count = 1, row_step = 1;
  int col_start = 0, col_count = 1, col_step = 1;

  std::vector<Coord> anchors() const;
  int loops() const { return (row_count > 1) + (col_count > 1); }
};

struct GenOptions {
  /// One turn per instruction sentence instead of a single turn.
  bool multi_turn = false;
};

TaskInstance gen_simple(std::uint64_t seed, int n_shapes, const GenOptions& options = {});
TaskInstance gen_regular(std::uint64_t seed, int n_shapes, const GenOptions& options = {});
/// Task for a given layout; `phrase_seed` only picks instruction wording.
TaskInstance regular_task(const RegularPattern& pattern, std::uint64_t phrase_seed,
                          const GenOptions& options = {});

/// Content hash of (board type, gold code, instruction).
std::string task_id(BoardType type, const std::string& gold_code, const std::string& instruction);

struct SplitCounts {
  int train = 0;
  int validation = 0;
  int test = 0;
  int total() const { return train + validation + test; }
};

inline constexpr SplitCounts kSimpleSplits{1072, 130, 130};
inline constexpr SplitCounts kRegularSplits{1168, 130, 130};

struct DatasetSplits {
  std::vector<TaskInstance> train;
  std::vector<TaskInstance> validation;
  std::vector<TaskInstance> test;
};

/// Unique ids and instruction texts across all three splits; n_shapes cycles
/// through 2..5.
DatasetSplits generate_splits(BoardType type, SplitCounts counts, std::uint64_t seed,
                              const GenOptions& options = {});

struct SchemaError {
  int line = 0;
  std::string field;
  std::string message;
  std::string to_string() const;
};

nlohmann::json task_to_json(const TaskInstance& task);
Expected<TaskInstance, SchemaError> task_from_json(const nlohmann::json& j, int line = 0);

Expected<std::size_t, std::string> write_dataset(const std::vector<TaskInstance>& tasks,
                                                 const std::string& path);
Expected<std::vector<TaskInstance>, SchemaError> read_dataset(const std::string& path);

}  // namespace gridbench::datagen
