#include "doctest.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <random>

#include "gridbench/board.hpp"
#include "support/rule_oracle.hpp"

using namespace gridbench;

namespace {

const std::array<const char*, 6> kColors = {"red", "green", "blue", "yellow", "orange", "purple"};

Board must_place(const Board& b, ShapeKind s, const char* color, Coord at) {
  auto r = place(b, s, Color(color), at);
  REQUIRE_MESSAGE(r.has_value(), (r.has_value() ? "" : r.error().detail));
  return *r;
}

}  // namespace

TEST_CASE("new board is empty and equal to itself") {
  const Board a = new_board();
  CHECK(a.component_count() == 0);
  CHECK(board_equal(a, new_board()));
  for (int x = 0; x < kBoardSize; ++x)
    for (int y = 0; y < kBoardSize; ++y) CHECK(a.at({x, y}).empty());
}

TEST_CASE("shape names round-trip and colors normalize case") {
  for (ShapeKind s : kAllShapes) CHECK(parse_shape(to_string(s)) == s);
  CHECK_FALSE(parse_shape("bridge").has_value());
  CHECK(Color("Green").name() == "green");
  CHECK(Rules::defaults().knows_color(Color("YELLOW")));
}

TEST_CASE("worked example: two washers and a bridge at the bottom left") {
  Board b = must_place(new_board(), ShapeKind::Washer, "green", {7, 0});
  REQUIRE(b.at({7, 0}).size() == 1);
  CHECK(b.at({7, 0})[0].color.name() == "green");

  b = must_place(b, ShapeKind::Washer, "yellow", {7, 1});
  b = must_place(b, ShapeKind::BridgeH, "red", {7, 0});
  REQUIRE(b.depth({7, 0}) == 2);
  REQUIRE(b.depth({7, 1}) == 2);
  CHECK(b.at({7, 0})[1] == Piece{ShapeKind::BridgeH, Color("red"), true});
  CHECK(b.at({7, 1})[1] == Piece{ShapeKind::BridgeH, Color("red"), false});
  CHECK(b.component_count() == 3);
  CHECK_FALSE(check_invariants(b).has_value());
}

TEST_CASE("bridge edge cases") {
  SUBCASE("partner cell off the right edge") {
    auto r = place(new_board(), ShapeKind::BridgeH, Color("red"), {7, 7});
    REQUIRE_FALSE(r.has_value());
    CHECK(r.error().category == ErrorCategory::DimensionMismatch);
  }
  SUBCASE("no support") {
    auto r = place(new_board(), ShapeKind::BridgeH, Color("red"), {7, 0});
    REQUIRE_FALSE(r.has_value());
    CHECK(r.error().category == ErrorCategory::DepthMismatch);
  }
  SUBCASE("unequal supports") {
    Board b = must_place(new_board(), ShapeKind::Washer, "red", {3, 3});
    b = must_place(b, ShapeKind::Screw, "red", {3, 3});
    b = must_place(b, ShapeKind::Washer, "red", {4, 3});
    auto r = place(b, ShapeKind::BridgeV, Color("blue"), {3, 3});
    REQUIRE_FALSE(r.has_value());
    CHECK(r.error().category == ErrorCategory::DepthMismatch);
  }
  SUBCASE("supports above two levels") {
    Board b;
    for (int y : {2, 3}) {
      b = must_place(b, ShapeKind::Washer, "red", {0, y});
      b = must_place(b, ShapeKind::Screw, "red", {0, y});
      b = must_place(b, ShapeKind::Washer, "red", {0, y});
    }
    auto r = place(b, ShapeKind::BridgeH, Color("blue"), {0, 2});
    REQUIRE_FALSE(r.has_value());
    CHECK(r.error().category == ErrorCategory::BridgePlacement);
  }
  SUBCASE("vertical bridge off the bottom edge") {
    auto r = place(new_board(), ShapeKind::BridgeV, Color("red"), {7, 2});
    REQUIRE_FALSE(r.has_value());
    CHECK(r.error().category == ErrorCategory::DimensionMismatch);
  }
}

TEST_CASE("symbolic constraints and limits") {
  const Board washer = must_place(new_board(), ShapeKind::Washer, "red", {2, 2});
  auto same = place(washer, ShapeKind::Washer, Color("blue"), {2, 2});
  REQUIRE_FALSE(same.has_value());
  CHECK(same.error().category == ErrorCategory::SameShapeStacking);

  auto nut = place(washer, ShapeKind::Nut, Color("blue"), {2, 2});
  REQUIRE_FALSE(nut.has_value());
  CHECK(nut.error().category == ErrorCategory::NotOnTopOfScrew);

  const Board screw = must_place(washer, ShapeKind::Screw, "green", {2, 2});
  CHECK(place(screw, ShapeKind::Nut, Color("blue"), {2, 2}).has_value());

  auto color = place(new_board(), ShapeKind::Nut, Color("magenta"), {0, 0});
  REQUIRE_FALSE(color.has_value());
  CHECK(color.error().category == ErrorCategory::UnknownKey);

  auto big = place(new_board(), ShapeKind::Nut, Color("red"), {2000, 0});
  REQUIRE_FALSE(big.has_value());
  CHECK(big.error().category == ErrorCategory::ValueError);

  auto neg = place(new_board(), ShapeKind::Nut, Color("red"), {-1, 0});
  REQUIRE_FALSE(neg.has_value());
  CHECK(neg.error().category == ErrorCategory::DimensionMismatch);

  Rules shallow;
  shallow.max_depth = 2;
  auto deep = place(screw, ShapeKind::Washer, Color("red"), {2, 2}, shallow);
  REQUIRE_FALSE(deep.has_value());
  CHECK(deep.error().category == ErrorCategory::MaxDepthExceeded);

  Rules relaxed;
  relaxed.forbid_same_shape_stacking = false;
  relaxed.nut_requires_screw = false;
  CHECK(place(washer, ShapeKind::Washer, Color("red"), {2, 2}, relaxed).has_value());
  CHECK(place(washer, ShapeKind::Nut, Color("red"), {2, 2}, relaxed).has_value());
}

TEST_CASE("place never mutates its input") {
  const Board before = must_place(new_board(), ShapeKind::Washer, "red", {1, 1});
  const Board copy = before;
  auto ok = place(before, ShapeKind::Screw, Color("red"), {1, 1});
  auto bad = place(before, ShapeKind::Washer, Color("red"), {1, 1});
  CHECK(ok.has_value());
  CHECK_FALSE(bad.has_value());
  CHECK(before == copy);
}

TEST_CASE("exhaustive empty-board placements match the rule-table oracle") {
  const auto t0 = std::chrono::steady_clock::now();
  int agree = 0, total = 0;
  oracle::Model empty{};
  for (ShapeKind s : kAllShapes) {
    for (const char* color : kColors) {
      for (int x = 0; x < 8; ++x) {
        for (int y = 0; y < 8; ++y) {
          ++total;
          const std::string expected = oracle::predict(empty, std::string(to_string(s)), x, y);
          auto r = place(new_board(), s, Color(color), {x, y});
          const std::string got = r ? "ok" : std::string(to_string(r.error().category));
          if (got == expected) ++agree;
        }
      }
    }
  }
  const auto elapsed = std::chrono::steady_clock::now() - t0;
  CHECK(total == 1920);
  CHECK(agree == 1920);
  CHECK(elapsed < std::chrono::seconds(1));
}

TEST_CASE("random placement sequences agree with the oracle and keep invariants") {
  std::mt19937 gen(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    Board board;
    oracle::Model model{};
    for (int step = 0; step < 60; ++step) {
      const ShapeKind s = kAllShapes[gen() % kAllShapes.size()];
      const int x = static_cast<int>(gen() % 10) - 1;
      const int y = static_cast<int>(gen() % 10) - 1;
      const std::string name(to_string(s));
      const std::string expected = oracle::predict(model, name, x, y);
      auto r = place(board, s, Color(kColors[gen() % kColors.size()]), {x, y});
      const std::string got = r ? "ok" : std::string(to_string(r.error().category));
      REQUIRE(got == expected);
      if (r) {
        board = *r;
        oracle::apply(model, name, x, y);
      }
      REQUIRE_FALSE(check_invariants(board).has_value());
    }
  }
}

TEST_CASE("disjoint placements commute") {
  struct Step { ShapeKind s; const char* color; Coord at; };
  std::array<Step, 3> steps = {{{ShapeKind::Washer, "red", {0, 0}},
                                {ShapeKind::Screw, "blue", {4, 5}},
                                {ShapeKind::Nut, "green", {7, 7}}}};
  std::array<int, 3> order = {0, 1, 2};
  std::optional<Board> reference;
  do {
    Board b;
    for (int i : order) b = must_place(b, steps[i].s, steps[i].color, steps[i].at);
    if (!reference) reference = b;
    CHECK(board_equal(*reference, b));
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("diffs") {
  Board gold = must_place(new_board(), ShapeKind::Washer, "green", {7, 0});
  gold = must_place(gold, ShapeKind::Washer, "yellow", {7, 1});

  CHECK(diff_boards(gold, gold).empty());

  Board actual = must_place(new_board(), ShapeKind::Washer, "green", {7, 0});
  actual = must_place(actual, ShapeKind::Washer, "blue", {7, 1});
  auto d = diff_boards(gold, actual);
  REQUIRE(d.size() == 1);
  CHECK(d[0].at == Coord{7, 1});
  CHECK(d[0].kind == DiffKind::Color);
  CHECK(d[0].level == 1);

  Board missing = must_place(new_board(), ShapeKind::Washer, "green", {7, 0});
  auto m = diff_boards(gold, missing);
  REQUIRE(m.size() == 1);
  CHECK(m[0].kind == DiffKind::Presence);
}

TEST_CASE("two-component permutations are reported as order diffs") {
  // Every ordered pair of single-cell shapes that is legal in both orders.
  const std::array<ShapeKind, 3> singles = {ShapeKind::Washer, ShapeKind::Screw, ShapeKind::Nut};
  int checked = 0;
  for (ShapeKind a : singles) {
    for (ShapeKind b : singles) {
      auto g1 = place(new_board(), a, Color("red"), {3, 3});
      auto g2 = g1 ? place(*g1, b, Color("blue"), {3, 3}) : g1;
      auto a1 = place(new_board(), b, Color("blue"), {3, 3});
      auto a2 = a1 ? place(*a1, a, Color("red"), {3, 3}) : a1;
      if (!g2 || !a2) continue;
      auto d = diff_boards(*g2, *a2);
      REQUIRE(d.size() == 1);
      CHECK(d[0].kind == DiffKind::Order);
      ++checked;
    }
  }
  CHECK(checked == 4);  // washer/screw and screw/nut, each in both orders
}

TEST_CASE("board equality is an equivalence and agrees with diffs") {
  std::mt19937 gen(7);
  std::vector<Board> boards;
  for (int i = 0; i < 40; ++i) {
    Board b;
    for (int k = 0; k < 6; ++k) {
      const Coord at{static_cast<int>(gen() % 3), static_cast<int>(gen() % 3)};
      auto r = place(b, kAllShapes[gen() % 5], Color(kColors[gen() % 2]), at);
      if (r) b = *r;
    }
    boards.push_back(b);
  }
  for (const auto& a : boards) {
    CHECK(board_equal(a, a));
    for (const auto& b : boards) {
      CHECK(board_equal(a, b) == board_equal(b, a));
      CHECK(board_equal(a, b) == diff_boards(a, b).empty());
      for (const auto& c : boards) {
        if (board_equal(a, b) && board_equal(b, c)) CHECK(board_equal(a, c));
      }
    }
  }
}
