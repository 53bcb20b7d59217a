#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridbench/errors.hpp"
#include "gridbench/expected.hpp"

namespace gridbench {

inline constexpr int kBoardSize = 8;
/// Coordinates whose magnitude exceeds this are treated as invalid values,
/// not as off-board positions.
inline constexpr int kMaxCoordinateMagnitude = 1024;

enum class ShapeKind : std::uint8_t { Washer, Screw, Nut, BridgeH, BridgeV };

inline constexpr std::array<ShapeKind, 5> kAllShapes = {
    ShapeKind::Washer, ShapeKind::Screw, ShapeKind::Nut, ShapeKind::BridgeH,
    ShapeKind::BridgeV};

std::string_view to_string(ShapeKind shape) noexcept;
std::optional<ShapeKind> parse_shape(std::string_view name) noexcept;

constexpr bool is_bridge(ShapeKind s) noexcept {
  return s == ShapeKind::BridgeH || s == ShapeKind::BridgeV;
}

/// Case-normalized color name. Membership in a vocabulary is checked by
/// Rules at placement time, not here.
class Color {
 public:
  Color() = default;
  explicit Color(std::string_view name);

  const std::string& name() const noexcept { return name_; }

  friend bool operator==(const Color&, const Color&) = default;
  friend auto operator<=>(const Color&, const Color&) = default;

 private:
  std::string name_;
};

/// x is the row (0 = top), y is the column (0 = leftmost).
struct Coord {
  int x = 0;
  int y = 0;

  friend bool operator==(const Coord&, const Coord&) = default;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

std::string to_string(Coord c);

constexpr bool in_bounds(Coord c) noexcept {
  return c.x >= 0 && c.x < kBoardSize && c.y >= 0 && c.y < kBoardSize;
}

/// The cell a bridge covers besides its anchor.
constexpr Coord bridge_partner(ShapeKind s, Coord anchor) noexcept {
  return s == ShapeKind::BridgeH ? Coord{anchor.x, anchor.y + 1}
                                 : Coord{anchor.x + 1, anchor.y};
}

/// One entry of a cell stack. Bridges appear twice: the anchor half at the
/// lesser coordinate and a mirrored partner half (anchor == false).
struct Piece {
  ShapeKind shape = ShapeKind::Washer;
  Color color;
  bool anchor = true;

  friend bool operator==(const Piece&, const Piece&) = default;
};

using Stack = std::vector<Piece>;

std::string summarize(const Stack& stack);

struct PlacementError {
  ErrorCategory category;
  std::string detail;
  std::optional<Coord> site;
};

/// Configurable constraint table for placements.
struct Rules {
  std::vector<std::string> colors = {"red",    "green",  "blue",
                                     "yellow", "orange", "purple"};
  int max_depth = 8;
  bool forbid_same_shape_stacking = true;
  bool nut_requires_screw = true;

  bool knows_color(const Color& c) const;

  static const Rules& defaults();
};

class Board {
 public:
  Board() = default;

  /// Stack at an in-bounds coordinate, bottom to top.
  const Stack& at(Coord c) const { return cells_[index(c)]; }
  int depth(Coord c) const { return static_cast<int>(at(c).size()); }

  /// Number of components; a bridge counts once.
  std::size_t component_count() const;
  bool empty() const { return component_count() == 0; }

  /// Validates and applies one placement in place. On error the board is
  /// left untouched.
  std::optional<PlacementError> try_place(ShapeKind shape, const Color& color,
                                          Coord at, const Rules& rules);

  friend bool operator==(const Board&, const Board&) = default;

 private:
  friend class BoardBuilder;

  static std::size_t index(Coord c) {
    return static_cast<std::size_t>(c.x * kBoardSize + c.y);
  }

  std::array<Stack, kBoardSize * kBoardSize> cells_{};
};

/// Unchecked stack assembly for decoding documents. Partner halves are
/// written by the caller; check_invariants() should be run afterwards.
class BoardBuilder {
 public:
  void push(Coord c, Piece p) { board_.cells_[Board::index(c)].push_back(std::move(p)); }
  const Board& board() const { return board_; }
  Board take() { return std::move(board_); }

 private:
  Board board_;
};

Board new_board();

/// Pure placement: the input board is never modified.
Expected<Board, PlacementError> place(const Board& board, ShapeKind shape,
                                      const Color& color, Coord at,
                                      const Rules& rules = Rules::defaults());

bool board_equal(const Board& a, const Board& b);

/// Structural invariants (pairing, no floating, depth cap). Returns the first
/// violated invariant as a message.
std::optional<std::string> check_invariants(const Board& board,
                                            const Rules& rules = Rules::defaults());

enum class DiffKind { Shape, Color, Order, Presence };

std::string_view to_string(DiffKind k) noexcept;

struct CellDiff {
  Coord at;
  int level = 1;  // first differing level, 1-based
  Stack expected;
  Stack actual;
  DiffKind kind = DiffKind::Presence;
};

/// One diff per differing cell, row-major. Empty iff board_equal(gold, actual).
std::vector<CellDiff> diff_boards(const Board& gold, const Board& actual);

}  // namespace gridbench
