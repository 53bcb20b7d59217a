#include "doctest.h"

#include "gridbench/lang/parser.hpp"
#include "gridbench/lang/validate.hpp"

using namespace gridbench::lang;

namespace {

std::optional<ConstraintViolation> check(const std::string& src, ValidationMode mode,
                                         std::set<std::string, std::less<>> combos = {}) {
  auto p = parse(src);
  REQUIRE(p.has_value());
  ValidationContext ctx;
  ctx.mode = mode;
  ctx.bound_combos = std::move(combos);
  return validate(*p, ctx);
}

const char* kDefAndUsage =
    "def obj(board, colors, x, y):\n"
    "    put(board, 'washer', colors[0], x, y)\n"
    "obj(board, ['red'], 1, 1)\n";

}  // namespace

TEST_CASE("simple-board rules") {
  CHECK_FALSE(check(kDefAndUsage, ValidationMode::SimpleBoard).has_value());
  auto missing = check("obj(board, ['red'], 1, 1)", ValidationMode::SimpleBoard);
  REQUIRE(missing.has_value());
  CHECK(missing->rule == ConstraintRule::MissingDefinition);
  auto unused = check("def obj(board, colors, x, y):\n    put(board, 'washer', colors[0], x, y)\n",
                      ValidationMode::SimpleBoard);
  REQUIRE(unused.has_value());
  CHECK(unused->rule == ConstraintRule::MissingUsage);
  CHECK_FALSE(check(std::string(kDefAndUsage) + "for i in range(2):\n    obj(board, ['red'], i, 4)\n",
                    ValidationMode::SimpleBoard)
                  .has_value());
}

TEST_CASE("regular-board rules") {
  auto unbound = check("zzz(board, ['red'], 0, 0)", ValidationMode::RegularBoard, {"nbb"});
  REQUIRE(unbound.has_value());
  CHECK(unbound->rule == ConstraintRule::UnboundCombo);
  CHECK(unbound->site.line == 1);
  CHECK_FALSE(check("for i in range(2):\n    nbb(board, ['red'], i, 0)\n",
                    ValidationMode::RegularBoard, {"nbb"})
                  .has_value());
  auto shadow = check("def nbb(board, colors, x, y):\n    put(board, 'nut', colors[0], x, y)\n"
                      "nbb(board, ['red'], 0, 0)\n",
                      ValidationMode::RegularBoard, {"nbb"});
  REQUIRE(shadow.has_value());
  CHECK(shadow->rule == ConstraintRule::ShadowedCombo);
}

TEST_CASE("structural rules") {
  auto deep = check(
      "for a in range(1):\n    for b in range(1):\n        for c in range(1):\n"
      "            for d in range(1):\n                for e in range(1):\n"
      "                    put(board, 'nut', 'red', 0, 0)\n",
      ValidationMode::RegularBoard);
  REQUIRE(deep.has_value());
  CHECK(deep->rule == ConstraintRule::NestingTooDeep);
  auto empty = check("def f(board, x):\n    y = x\nf(board, 1)\n", ValidationMode::SimpleBoard);
  REQUIRE(empty.has_value());
  CHECK(empty->rule == ConstraintRule::EmptyFunction);
  auto builtin = check("def put(board, x):\n    put(board, x)\nput(board, 1)\n",
                       ValidationMode::SimpleBoard);
  REQUIRE(builtin.has_value());
  CHECK(builtin->rule == ConstraintRule::ShadowedBuiltin);
  auto script = check("put(board, 'nut', 'red', 0, 0)\nfoo(board)\n", ValidationMode::Script);
  REQUIRE(script.has_value());
  CHECK(script->rule == ConstraintRule::UnboundCombo);
}
