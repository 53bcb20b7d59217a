#pragma once

#include <optional>
#include <string_view>

namespace gridbench {

/// Every failure category an execution can end in. The first eight are
/// produced by board placement; the rest by the interpreter or validator.
enum class ErrorCategory {
  DepthMismatch,
  BridgePlacement,
  DimensionMismatch,
  ValueError,
  UnknownKey,
  NotOnTopOfScrew,
  SameShapeStacking,
  MaxDepthExceeded,
  UndefinedName,
  BudgetExceeded,
  ArityError,
  ConstraintViolation,
};

inline constexpr ErrorCategory kAllErrorCategories[] = {
    ErrorCategory::DepthMismatch,     ErrorCategory::BridgePlacement,
    ErrorCategory::DimensionMismatch, ErrorCategory::ValueError,
    ErrorCategory::UnknownKey,        ErrorCategory::NotOnTopOfScrew,
    ErrorCategory::SameShapeStacking, ErrorCategory::MaxDepthExceeded,
    ErrorCategory::UndefinedName,     ErrorCategory::BudgetExceeded,
    ErrorCategory::ArityError,        ErrorCategory::ConstraintViolation,
};

std::string_view to_string(ErrorCategory c) noexcept;
std::optional<ErrorCategory> parse_error_category(std::string_view name) noexcept;

}  // namespace gridbench
