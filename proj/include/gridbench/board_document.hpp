#pragma once

#include <string>

#include "json.hpp"

#include "gridbench/board.hpp"
#include "gridbench/expected.hpp"

namespace gridbench {

/// Canonical board document: row-major list of {x, y, stack:[{shape, color}]},
/// bridges listed only at their anchor cell with "anchor": true and their
/// 1-based "level" (partner cells omit the bridge half).
nlohmann::json to_document(const Board& board);

Expected<Board, std::string> from_document(const nlohmann::json& doc);

std::string render_ascii(const Board& board);

}  // namespace gridbench
