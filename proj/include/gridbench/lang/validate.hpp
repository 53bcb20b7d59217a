#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "gridbench/lang/ast.hpp"

namespace gridbench::lang {

enum class ValidationMode {
  SimpleBoard,   // definition plus usage required
  RegularBoard,  // usage over bound combos
  Script,        // flat builtin calls, e.g. human reconstructions
};

enum class ConstraintRule {
  MissingDefinition,
  MissingUsage,
  UnboundCombo,
  ShadowedCombo,
  ShadowedBuiltin,
  NestingTooDeep,
  EmptyFunction,
};

std::string_view to_string(ConstraintRule r) noexcept;

struct ConstraintViolation {
  ConstraintRule rule;
  std::string detail;
  SourceSpan site;
};

inline constexpr int kMaxLoopNesting = 4;

struct ValidationContext {
  ValidationMode mode = ValidationMode::SimpleBoard;
  std::set<std::string, std::less<>> bound_combos;
  std::set<std::string, std::less<>> builtins = {"put"};
};

std::optional<ConstraintViolation> validate(const Program& program,
                                            const ValidationContext& ctx);

}  // namespace gridbench::lang
