#include "gridbench/errors.hpp"

#include <array>
#include <utility>

namespace gridbench {
namespace {

constexpr std::array<std::pair<ErrorCategory, std::string_view>, 12> kNames = {{
    {ErrorCategory::DepthMismatch, "DepthMismatch"},
    {ErrorCategory::BridgePlacement, "BridgePlacement"},
    {ErrorCategory::DimensionMismatch, "DimensionMismatch"},
    {ErrorCategory::ValueError, "ValueError"},
    {ErrorCategory::UnknownKey, "UnknownKey"},
    {ErrorCategory::NotOnTopOfScrew, "NotOnTopOfScrew"},
    {ErrorCategory::SameShapeStacking, "SameShapeStacking"},
    {ErrorCategory::MaxDepthExceeded, "MaxDepthExceeded"},
    {ErrorCategory::UndefinedName, "UndefinedName"},
    {ErrorCategory::BudgetExceeded, "BudgetExceeded"},
    {ErrorCategory::ArityError, "ArityError"},
    {ErrorCategory::ConstraintViolation, "ConstraintViolation"},
}};

}  // namespace

std::string_view to_string(ErrorCategory c) noexcept {
  for (const auto& [cat, name] : kNames) {
    if (cat == c) return name;
  }
  return "Unknown";
}

std::optional<ErrorCategory> parse_error_category(std::string_view name) noexcept {
  for (const auto& [cat, n] : kNames) {
    if (n == name) return cat;
  }
  return std::nullopt;
}

}  // namespace gridbench
