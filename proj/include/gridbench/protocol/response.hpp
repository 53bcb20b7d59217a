#pragma once

#include <string>
#include <string_view>

#include "gridbench/expected.hpp"
#include "gridbench/protocol/task.hpp"

namespace gridbench::protocol {

enum class AbortReason { MissingLabel, ExtraProse, EmptyBlock, ProviderFailure };

std::string_view to_string(AbortReason r) noexcept;
std::optional<AbortReason> parse_abort_reason(std::string_view s) noexcept;

struct ParsedResponse {
  BoardType board_type = BoardType::Simple;
  std::string function_block;  // simple boards
  std::string usage_block;     // simple boards
  std::string output_block;    // regular boards
  std::string raw;

  /// Executable code of the answer.
  std::string code() const;
};

/// Strict mode: labels must appear verbatim on their own lines and nothing but
/// code may surround them. Lenient mode first drops markdown fence lines and
/// tolerates whitespace around labels.
Expected<ParsedResponse, AbortReason> parse_response(std::string_view raw, BoardType board_type,
                                                     bool strict);

}  // namespace gridbench::protocol
