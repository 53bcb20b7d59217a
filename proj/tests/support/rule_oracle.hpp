#pragma once

// Independent rule table for placements. Works on a coarse model of the board
// (height and top shape per cell) and never calls into the library.

#include <array>
#include <map>
#include <string>
#include <utility>

namespace oracle {

struct CellModel {
  int height = 0;
  std::string top = "none";
};

using Model = std::array<std::array<CellModel, 8>, 8>;

inline bool on_board(int x, int y) { return x >= 0 && x < 8 && y >= 0 && y < 8; }

// (top of stack, new shape) -> outcome for single-cell shapes.
inline const std::map<std::pair<std::string, std::string>, std::string>& stacking_table() {
  static const std::map<std::pair<std::string, std::string>, std::string> t = {
      {{"none", "washer"}, "ok"},
      {{"none", "screw"}, "ok"},
      {{"none", "nut"}, "ok"},
      {{"washer", "washer"}, "SameShapeStacking"},
      {{"washer", "screw"}, "ok"},
      {{"washer", "nut"}, "NotOnTopOfScrew"},
      {{"screw", "washer"}, "ok"},
      {{"screw", "screw"}, "SameShapeStacking"},
      {{"screw", "nut"}, "ok"},
      {{"nut", "washer"}, "ok"},
      {{"nut", "screw"}, "ok"},
      {{"nut", "nut"}, "SameShapeStacking"},
      {{"bridge-h", "washer"}, "ok"},
      {{"bridge-h", "screw"}, "ok"},
      {{"bridge-h", "nut"}, "NotOnTopOfScrew"},
      {{"bridge-v", "washer"}, "ok"},
      {{"bridge-v", "screw"}, "ok"},
      {{"bridge-v", "nut"}, "NotOnTopOfScrew"},
  };
  return t;
}

/// "ok" or the expected error category name, for vocabulary colors and
/// coordinates of small magnitude.
inline std::string predict(const Model& m, const std::string& shape, int x, int y,
                           int max_depth = 8) {
  if (!on_board(x, y)) return "DimensionMismatch";
  if (shape == "bridge-h" || shape == "bridge-v") {
    const int px = shape == "bridge-v" ? x + 1 : x;
    const int py = shape == "bridge-h" ? y + 1 : y;
    if (!on_board(px, py)) return "DimensionMismatch";
    const int a = m[x][y].height;
    const int b = m[px][py].height;
    if (a == 0 || a != b) return "DepthMismatch";
    if (a >= 3) return "BridgePlacement";
    if (a + 1 > max_depth) return "MaxDepthExceeded";
    return "ok";
  }
  const std::string verdict = stacking_table().at({m[x][y].top, shape});
  if (verdict != "ok") return verdict;
  if (m[x][y].height + 1 > max_depth) return "MaxDepthExceeded";
  return "ok";
}

inline void apply(Model& m, const std::string& shape, int x, int y) {
  m[x][y].height += 1;
  m[x][y].top = shape;
  if (shape == "bridge-h") {
    m[x][y + 1].height += 1;
    m[x][y + 1].top = shape;
  } else if (shape == "bridge-v") {
    m[x + 1][y].height += 1;
    m[x + 1][y].top = shape;
  }
}

}  // namespace oracle
