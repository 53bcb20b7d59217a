#include "gridbench/board.hpp"

#include <algorithm>
#include <cstdlib>

#include "gridbench/util.hpp"

namespace gridbench {
namespace {

PlacementError make_error(ErrorCategory cat, std::string detail, Coord site) {
  return PlacementError{cat, std::move(detail), site};
}

}  // namespace

std::string_view to_string(ShapeKind shape) noexcept {
  switch (shape) {
    case ShapeKind::Washer: return "washer";
    case ShapeKind::Screw: return "screw";
    case ShapeKind::Nut: return "nut";
    case ShapeKind::BridgeH: return "bridge-h";
    case ShapeKind::BridgeV: return "bridge-v";
  }
  return "?";
}

std::optional<ShapeKind> parse_shape(std::string_view name) noexcept {
  for (ShapeKind s : kAllShapes) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

Color::Color(std::string_view name) : name_(to_lower(trim(name))) {}

std::string to_string(Coord c) {
  return "(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ")";
}

std::string summarize(const Stack& stack) {
  if (stack.empty()) return "[]";
  std::string out = "[";
  for (std::size_t i = 0; i < stack.size(); ++i) {
    if (i) out += ", ";
    out += stack[i].color.name();
    out += ' ';
    out += to_string(stack[i].shape);
    if (is_bridge(stack[i].shape) && !stack[i].anchor) out += " (partner)";
  }
  out += "]";
  return out;
}

bool Rules::knows_color(const Color& c) const {
  return std::find(colors.begin(), colors.end(), c.name()) != colors.end();
}

const Rules& Rules::defaults() {
  static const Rules rules;
  return rules;
}

std::size_t Board::component_count() const {
  std::size_t n = 0;
  for (const auto& stack : cells_) {
    for (const auto& p : stack) {
      if (p.anchor) ++n;
    }
  }
  return n;
}

std::optional<PlacementError> Board::try_place(ShapeKind shape, const Color& color,
                                               Coord at, const Rules& rules) {
  if (!rules.knows_color(color)) {
    return make_error(ErrorCategory::UnknownKey, "unknown color '" + color.name() + "'", at);
  }
  if (std::abs(at.x) > kMaxCoordinateMagnitude || std::abs(at.y) > kMaxCoordinateMagnitude) {
    return make_error(ErrorCategory::ValueError,
                      "coordinate " + to_string(at) + " is not a valid cell index", at);
  }
  if (!in_bounds(at)) {
    return make_error(ErrorCategory::DimensionMismatch,
                      "cell " + to_string(at) + " is outside the 8x8 board", at);
  }

  if (is_bridge(shape)) {
    const Coord partner = bridge_partner(shape, at);
    if (!in_bounds(partner)) {
      return make_error(ErrorCategory::DimensionMismatch,
                        std::string(to_string(shape)) + " at " + to_string(at) +
                            " would cover " + to_string(partner) + " outside the board",
                        at);
    }
    const int d1 = depth(at);
    const int d2 = depth(partner);
    if (d1 == 0 || d2 == 0 || d1 != d2) {
      return make_error(ErrorCategory::DepthMismatch,
                        "bridge supports at " + to_string(at) + " and " + to_string(partner) +
                            " have depths " + std::to_string(d1) + " and " + std::to_string(d2),
                        at);
    }
    if (d1 > 2) {
      return make_error(ErrorCategory::BridgePlacement,
                        "bridge supports at depth " + std::to_string(d1) +
                            " exceed the two-level limit",
                        at);
    }
    if (d1 + 1 > rules.max_depth) {
      return make_error(ErrorCategory::MaxDepthExceeded,
                        "stack depth would exceed " + std::to_string(rules.max_depth), at);
    }
    cells_[index(at)].push_back(Piece{shape, color, true});
    cells_[index(partner)].push_back(Piece{shape, color, false});
    return std::nullopt;
  }

  const Stack& stack = cells_[index(at)];
  if (!stack.empty()) {
    const Piece& top = stack.back();
    if (rules.forbid_same_shape_stacking && top.shape == shape) {
      return make_error(ErrorCategory::SameShapeStacking,
                        std::string(to_string(shape)) + " placed directly on a " +
                            std::string(to_string(top.shape)) + " at " + to_string(at),
                        at);
    }
    if (rules.nut_requires_screw && shape == ShapeKind::Nut && top.shape != ShapeKind::Screw) {
      return make_error(ErrorCategory::NotOnTopOfScrew,
                        "nut at " + to_string(at) + " rests on a " +
                            std::string(to_string(top.shape)) + ", not a screw",
                        at);
    }
  }
  if (static_cast<int>(stack.size()) + 1 > rules.max_depth) {
    return make_error(ErrorCategory::MaxDepthExceeded,
                      "stack depth would exceed " + std::to_string(rules.max_depth), at);
  }
  cells_[index(at)].push_back(Piece{shape, color, true});
  return std::nullopt;
}

Board new_board() { return Board{}; }

Expected<Board, PlacementError> place(const Board& board, ShapeKind shape,
                                      const Color& color, Coord at, const Rules& rules) {
  Board next = board;
  if (auto err = next.try_place(shape, color, at, rules)) return unexpected(std::move(*err));
  return next;
}

bool board_equal(const Board& a, const Board& b) { return a == b; }

std::optional<std::string> check_invariants(const Board& board, const Rules& rules) {
  for (int x = 0; x < kBoardSize; ++x) {
    for (int y = 0; y < kBoardSize; ++y) {
      const Coord c{x, y};
      const Stack& stack = board.at(c);
      if (static_cast<int>(stack.size()) > rules.max_depth) {
        return "stack at " + to_string(c) + " deeper than " + std::to_string(rules.max_depth);
      }
      for (std::size_t level = 0; level < stack.size(); ++level) {
        const Piece& p = stack[level];
        if (!is_bridge(p.shape)) {
          if (!p.anchor) return "non-bridge partner entry at " + to_string(c);
          continue;
        }
        // Partner halves point back toward the anchor at the same level.
        Coord other = p.anchor ? bridge_partner(p.shape, c)
                               : (p.shape == ShapeKind::BridgeH ? Coord{x, y - 1}
                                                                : Coord{x - 1, y});
        if (!in_bounds(other)) return "bridge at " + to_string(c) + " has no partner cell";
        const Stack& os = board.at(other);
        if (os.size() <= level) {
          return "bridge at " + to_string(c) + " level " + std::to_string(level + 1) +
                 " unpaired";
        }
        const Piece& q = os[level];
        if (q.shape != p.shape || q.color != p.color || q.anchor == p.anchor) {
          return "bridge at " + to_string(c) + " level " + std::to_string(level + 1) +
                 " mismatched with " + to_string(other);
        }
      }
    }
  }
  return std::nullopt;
}

std::string_view to_string(DiffKind k) noexcept {
  switch (k) {
    case DiffKind::Shape: return "shape";
    case DiffKind::Color: return "color";
    case DiffKind::Order: return "order";
    case DiffKind::Presence: return "presence";
  }
  return "?";
}

namespace {

bool same_multiset(const Stack& a, const Stack& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const Piece& p : a) {
    bool found = false;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!used[i] && b[i] == p) {
        used[i] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

std::vector<CellDiff> diff_boards(const Board& gold, const Board& actual) {
  std::vector<CellDiff> diffs;
  for (int x = 0; x < kBoardSize; ++x) {
    for (int y = 0; y < kBoardSize; ++y) {
      const Coord c{x, y};
      const Stack& g = gold.at(c);
      const Stack& a = actual.at(c);
      if (g == a) continue;
      std::size_t level = 0;
      while (level < g.size() && level < a.size() && g[level] == a[level]) ++level;
      CellDiff d{c, static_cast<int>(level) + 1, g, a, DiffKind::Presence};
      if (same_multiset(g, a)) {
        d.kind = DiffKind::Order;
      } else if (level < g.size() && level < a.size()) {
        const Piece& gp = g[level];
        const Piece& ap = a[level];
        if (gp.shape != ap.shape || gp.anchor != ap.anchor) {
          d.kind = DiffKind::Shape;
        } else {
          d.kind = DiffKind::Color;
        }
      }
      diffs.push_back(std::move(d));
    }
  }
  return diffs;
}

}  // namespace gridbench
