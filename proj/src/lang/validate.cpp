#include "gridbench/lang/validate.hpp"

namespace gridbench::lang {
namespace {

struct Walker {
  const ValidationContext& ctx;
  std::set<std::string, std::less<>> defined;
  std::optional<ConstraintViolation> found;
  bool usage_seen = false;

  void flag(ConstraintRule rule, std::string detail, SourceSpan at) {
    if (!found) found = ConstraintViolation{rule, std::move(detail), at};
  }

  bool contains_call(const Block& block) const {
    for (const Stmt& s : block) {
      if (std::holds_alternative<Call>(s.node)) return true;
      if (const auto* loop = std::get_if<ForLoop>(&s.node); loop && contains_call(loop->body)) {
        return true;
      }
    }
    return false;
  }

  void check_call(const Call& call, bool top_level) {
    const bool builtin = ctx.builtins.contains(call.callee);
    const bool local = defined.contains(call.callee);
    const bool bound = ctx.bound_combos.contains(call.callee);
    if (top_level && local) usage_seen = true;
    if (ctx.mode != ValidationMode::SimpleBoard && !builtin && !local && !bound) {
      flag(ConstraintRule::UnboundCombo, "call to unbound function '" + call.callee + "'",
           call.span);
    }
  }

  void walk(const Block& block, int loop_depth, bool top_level) {
    for (const Stmt& s : block) {
      if (found) return;
      if (const auto* def = std::get_if<FunctionDef>(&s.node)) {
        if (ctx.builtins.contains(def->name)) {
          flag(ConstraintRule::ShadowedBuiltin, "definition shadows builtin '" + def->name + "'",
               def->span);
        } else if (ctx.mode == ValidationMode::RegularBoard &&
                   ctx.bound_combos.contains(def->name)) {
          flag(ConstraintRule::ShadowedCombo,
               "definition shadows provided combo '" + def->name + "'", def->span);
        } else if (!contains_call(def->body)) {
          flag(ConstraintRule::EmptyFunction, "function '" + def->name + "' places nothing",
               def->span);
        }
        defined.insert(def->name);
        walk(def->body, 0, false);
      } else if (const auto* loop = std::get_if<ForLoop>(&s.node)) {
        if (loop_depth + 1 > kMaxLoopNesting) {
          flag(ConstraintRule::NestingTooDeep,
               "loops nested deeper than " + std::to_string(kMaxLoopNesting), loop->span);
          return;
        }
        walk(loop->body, loop_depth + 1, top_level);
      } else if (const auto* call = std::get_if<Call>(&s.node)) {
        check_call(*call, top_level);
      }
    }
  }
};

}  // namespace

std::string_view to_string(ConstraintRule r) noexcept {
  switch (r) {
    case ConstraintRule::MissingDefinition: return "MissingDefinition";
    case ConstraintRule::MissingUsage: return "MissingUsage";
    case ConstraintRule::UnboundCombo: return "UnboundCombo";
    case ConstraintRule::ShadowedCombo: return "ShadowedCombo";
    case ConstraintRule::ShadowedBuiltin: return "ShadowedBuiltin";
    case ConstraintRule::NestingTooDeep: return "NestingTooDeep";
    case ConstraintRule::EmptyFunction: return "EmptyFunction";
  }
  return "?";
}

std::optional<ConstraintViolation> validate(const Program& program,
                                            const ValidationContext& ctx) {
  Walker w{ctx, {}, std::nullopt, false};
  w.walk(program.items, 0, true);
  if (w.found) return w.found;
  if (ctx.mode == ValidationMode::SimpleBoard) {
    if (w.defined.empty()) {
      return ConstraintViolation{ConstraintRule::MissingDefinition,
                                 "simple-board answers must define a function", {1, 1}};
    }
    if (!w.usage_seen) {
      return ConstraintViolation{ConstraintRule::MissingUsage,
                                 "no top-level call uses the defined function", {1, 1}};
    }
  }
  return std::nullopt;
}

}  // namespace gridbench::lang
