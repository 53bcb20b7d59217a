#include "gridbench/board_document.hpp"

#include <array>
#include <map>
#include <sstream>

namespace gridbench {

using nlohmann::json;

json to_document(const Board& board) {
  json cells = json::array();
  for (int x = 0; x < kBoardSize; ++x) {
    for (int y = 0; y < kBoardSize; ++y) {
      const Stack& stack = board.at({x, y});
      if (stack.empty()) continue;
      json entries = json::array();
      for (const Piece& p : stack) {
        if (!p.anchor) continue;
        json e = {{"shape", std::string(to_string(p.shape))}, {"color", p.color.name()}};
        if (is_bridge(p.shape)) {
          e["anchor"] = true;
          e["level"] = static_cast<int>(&p - stack.data()) + 1;
        }
        entries.push_back(std::move(e));
      }
      cells.push_back({{"x", x}, {"y", y}, {"stack", std::move(entries)}});
    }
  }
  return cells;
}

Expected<Board, std::string> from_document(const json& doc) {
  if (!doc.is_array()) return unexpected(std::string("board document must be an array"));

  constexpr std::size_t kCells = kBoardSize * kBoardSize;
  auto cell_index = [](Coord c) { return static_cast<std::size_t>(c.x * kBoardSize + c.y); };

  struct Listed {
    Piece piece;
    int level = 0;  // declared level, bridges only
  };
  std::array<std::vector<Listed>, kCells> listed{};
  std::array<std::map<int, Piece>, kCells> claims{};  // partner halves by level
  std::array<bool, kCells> seen{};

  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& cell = doc[i];
    const std::string where = "cell record " + std::to_string(i);
    if (!cell.is_object() || !cell.contains("x") || !cell.contains("y") ||
        !cell.contains("stack")) {
      return unexpected(where + ": expected {x, y, stack}");
    }
    if (!cell["x"].is_number_integer() || !cell["y"].is_number_integer() ||
        !cell["stack"].is_array()) {
      return unexpected(where + ": bad field types");
    }
    const Coord c{cell["x"].get<int>(), cell["y"].get<int>()};
    if (!in_bounds(c)) return unexpected(where + ": coordinate " + to_string(c) + " off board");
    if (seen[cell_index(c)]) return unexpected(where + ": duplicate cell " + to_string(c));
    seen[cell_index(c)] = true;
    for (const json& e : cell["stack"]) {
      if (!e.is_object() || !e.contains("shape") || !e.contains("color") ||
          !e["shape"].is_string() || !e["color"].is_string()) {
        return unexpected(where + ": stack entry needs string shape and color");
      }
      auto shape = parse_shape(e["shape"].get<std::string>());
      if (!shape) return unexpected(where + ": unknown shape " + e["shape"].dump());
      const bool anchor_flag = e.contains("anchor") && e["anchor"].is_boolean() &&
                               e["anchor"].get<bool>();
      if (is_bridge(*shape) != anchor_flag) {
        return unexpected(where + ": \"anchor\": true must be set exactly on bridges");
      }
      Listed entry{Piece{*shape, Color(e["color"].get<std::string>()), true}, 0};
      if (is_bridge(*shape)) {
        if (!e.contains("level") || !e["level"].is_number_integer() || e["level"].get<int>() < 1) {
          return unexpected(where + ": bridge entries need a positive integer \"level\"");
        }
        entry.level = e["level"].get<int>();
        const Coord partner = bridge_partner(*shape, c);
        if (!in_bounds(partner)) {
          return unexpected(where + ": bridge extends off the board");
        }
        auto [it, fresh] = claims[cell_index(partner)].emplace(
            entry.level, Piece{*shape, entry.piece.color, false});
        if (!fresh) {
          return unexpected(where + ": two bridges claim " + to_string(partner) + " level " +
                            std::to_string(entry.level));
        }
      }
      listed[cell_index(c)].push_back(std::move(entry));
    }
  }

  // Interleave listed entries with claimed partner halves, bottom up.
  BoardBuilder builder;
  for (int x = 0; x < kBoardSize; ++x) {
    for (int y = 0; y < kBoardSize; ++y) {
      const Coord c{x, y};
      const auto& own = listed[cell_index(c)];
      const auto& claimed = claims[cell_index(c)];
      const int height = static_cast<int>(own.size() + claimed.size());
      std::size_t next = 0;
      for (int level = 1; level <= height; ++level) {
        if (auto it = claimed.find(level); it != claimed.end()) {
          builder.push(c, it->second);
          continue;
        }
        if (next >= own.size()) break;
        const Listed& e = own[next++];
        if (is_bridge(e.piece.shape) && e.level != level) {
          return unexpected("bridge at " + to_string(c) + " declares level " +
                            std::to_string(e.level) + " but sits at level " +
                            std::to_string(level));
        }
        builder.push(c, e.piece);
      }
      if (builder.board().depth(c) != height) {
        return unexpected("cell " + to_string(c) + " has a gap below a bridge half");
      }
    }
  }

  Board board = builder.take();
  // Only structural invariants apply; symbolic placement rules are not
  // re-checked for stored gold boards.
  Rules loose;
  loose.max_depth = 64;
  if (auto bad = check_invariants(board, loose)) return unexpected(*bad);
  return board;
}

std::string render_ascii(const Board& board) {
  std::ostringstream out;
  for (int x = 0; x < kBoardSize; ++x) {
    for (int y = 0; y < kBoardSize; ++y) {
      const Stack& s = board.at({x, y});
      if (s.empty()) {
        out << " . ";
      } else {
        const Piece& top = s.back();
        char glyph = '?';
        switch (top.shape) {
          case ShapeKind::Washer: glyph = 'w'; break;
          case ShapeKind::Screw: glyph = 's'; break;
          case ShapeKind::Nut: glyph = 'n'; break;
          case ShapeKind::BridgeH: glyph = '-'; break;
          case ShapeKind::BridgeV: glyph = '|'; break;
        }
        out << glyph << s.size() << ' ';
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace gridbench
