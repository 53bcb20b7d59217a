#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridbench/board.hpp"
#include "gridbench/expected.hpp"
#include "gridbench/lang/ast.hpp"
#include "gridbench/lang/interpreter.hpp"

namespace gridbench::protocol {

enum class BoardType { Simple, Regular };
enum class InstructionType { Synthetic, Human };

std::string_view to_string(BoardType t) noexcept;
std::string_view to_string(InstructionType t) noexcept;
std::optional<BoardType> parse_board_type(std::string_view s) noexcept;
std::optional<InstructionType> parse_instruction_type(std::string_view s) noexcept;

struct ComboDef {
  lang::FunctionDef def;
  std::string docstring;
  friend bool operator==(const ComboDef&, const ComboDef&) = default;
};

struct TaskInstance {
  std::string id;
  BoardType board_type = BoardType::Simple;
  InstructionType instruction_type = InstructionType::Synthetic;
  std::vector<std::string> turns;
  std::string gold_code;
  std::optional<ComboDef> combo;
  Board gold_board;
  int n_shapes = 0;
  std::string origin = "regenerated";

  friend bool operator==(const TaskInstance&, const TaskInstance&) = default;
};

/// All turns joined by newlines.
std::string instruction_text(const TaskInstance& task);

lang::ComboTable combo_table(const TaskInstance& task);

/// Parses and runs gold_code with the task's combo bound.
Expected<Board, std::string> execute_gold(const TaskInstance& task);

/// Solution blocks of a simple-board answer: definitions and top-level usage.
struct SolutionParts {
  std::string function_block;
  std::string usage_block;
};

SolutionParts split_solution(const lang::Program& program);

}  // namespace gridbench::protocol
