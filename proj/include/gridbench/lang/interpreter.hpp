#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gridbench/board.hpp"
#include "gridbench/errors.hpp"
#include "gridbench/expected.hpp"
#include "gridbench/lang/ast.hpp"

namespace gridbench::lang {

struct ExecBudget {
  std::int64_t max_placements = 10'000;
  std::int64_t max_iterations = 100'000;
  std::int64_t max_ast_nodes = 20'000;
  int max_call_depth = 32;
};

struct RuntimeErrorReport {
  ErrorCategory category;
  SourceSpan site;
  std::string detail;
};

/// Opaque handle standing for the board a builtin draws on.
struct BoardHandle {
  friend bool operator==(BoardHandle, BoardHandle) { return true; }
};

using StringList = std::vector<std::string>;
using Value = std::variant<std::int64_t, std::string, StringList, BoardHandle>;

std::string_view type_name(const Value& v) noexcept;

struct BuiltinError {
  ErrorCategory category;
  std::string detail;
};

/// Effectful builtin: receives evaluated arguments, mutates its world.
using Builtin = std::function<std::optional<BuiltinError>(std::span<const Value>)>;

/// Everything a program can touch: builtins and pre-bound global names.
struct World {
  std::map<std::string, Builtin, std::less<>> builtins;
  std::map<std::string, Value, std::less<>> globals;
};

using ComboTable = std::map<std::string, FunctionDef, std::less<>>;

/// Runs a program against a world. Statements are executed top to bottom and
/// the first error halts execution.
std::optional<RuntimeErrorReport> run(const Program& program, const ComboTable& combos,
                                      const ExecBudget& budget, World& world);

/// Blocks-world execution: binds `board` and `put` over a fresh board.
Expected<Board, RuntimeErrorReport> execute(const Program& program,
                                            const ComboTable& combos = {},
                                            const ExecBudget& budget = {},
                                            const Rules& rules = Rules::defaults());

/// Builtin `put(board, shape, color, x, y)` writing into `board`.
Builtin make_put_builtin(Board& board, const Rules& rules);

}  // namespace gridbench::lang
