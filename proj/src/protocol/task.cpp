#include "gridbench/protocol/task.hpp"

#include "gridbench/lang/parser.hpp"

namespace gridbench::protocol {

std::string_view to_string(BoardType t) noexcept {
  return t == BoardType::Simple ? "simple" : "regular";
}

std::string_view to_string(InstructionType t) noexcept {
  return t == InstructionType::Synthetic ? "synthetic" : "human";
}

std::optional<BoardType> parse_board_type(std::string_view s) noexcept {
  if (s == "simple") return BoardType::Simple;
  if (s == "regular") return BoardType::Regular;
  return std::nullopt;
}

std::optional<InstructionType> parse_instruction_type(std::string_view s) noexcept {
  if (s == "synthetic") return InstructionType::Synthetic;
  if (s == "human") return InstructionType::Human;
  return std::nullopt;
}

std::string instruction_text(const TaskInstance& task) {
  std::string out;
  for (const auto& t : task.turns) {
    if (!out.empty()) out += '\n';
    out += t;
  }
  return out;
}

lang::ComboTable combo_table(const TaskInstance& task) {
  lang::ComboTable table;
  if (task.combo) table.emplace(task.combo->def.name, task.combo->def);
  return table;
}

Expected<Board, std::string> execute_gold(const TaskInstance& task) {
  auto program = lang::parse(task.gold_code);
  if (!program) return unexpected("gold code does not parse: " + program.error().to_string());
  auto board = lang::execute(*program, combo_table(task));
  if (!board) {
    return unexpected("gold code fails with " + std::string(to_string(board.error().category)) +
                      ": " + board.error().detail);
  }
  return *board;
}

SolutionParts split_solution(const lang::Program& program) {
  lang::Program defs, usage;
  for (const auto& s : program.items) {
    (std::holds_alternative<lang::FunctionDef>(s.node) ? defs : usage).items.push_back(s);
  }
  return {lang::pretty_print(defs), lang::pretty_print(usage)};
}

}  // namespace gridbench::protocol
