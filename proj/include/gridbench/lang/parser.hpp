#pragma once

#include <string>
#include <string_view>

#include "gridbench/expected.hpp"
#include "gridbench/lang/ast.hpp"

namespace gridbench::lang {

struct ParseError {
  int line = 0;
  int column = 0;
  std::string message;

  std::string to_string() const;
};

/// Parses the restricted placement language. Anything outside the grammar
/// (imports, conditionals, attribute access, comments) is a ParseError.
Expected<Program, ParseError> parse(std::string_view source);

/// Canonical 4-space-indented rendering; parse(pretty_print(p)) == p.
std::string pretty_print(const Program& program);
std::string pretty_print(const FunctionDef& def);
std::string pretty_print(const Expr& expr);

}  // namespace gridbench::lang
