#include "gridbench/lang/parser.hpp"

#include <sstream>

namespace gridbench::lang {
namespace {

// Binding strength, loosest first.
int precedence(const Expr& e) {
  if (const auto* b = std::get_if<Binary>(&e.node)) {
    switch (b->op) {
      case BinOp::Add:
      case BinOp::Sub: return 1;
      case BinOp::Mul: return 2;
      case BinOp::Pow: return 4;
    }
  }
  if (std::holds_alternative<Neg>(e.node)) return 3;
  return 5;
}

void print_expr(std::ostream& out, const Expr& e);

void print_wrapped(std::ostream& out, const Expr& e, bool parens) {
  if (parens) out << '(';
  print_expr(out, e);
  if (parens) out << ')';
}

void print_expr(std::ostream& out, const Expr& e) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          out << n.value;
        } else if constexpr (std::is_same_v<T, NameRef>) {
          out << n.name;
        } else if constexpr (std::is_same_v<T, Subscript>) {
          out << n.name << '[';
          print_expr(out, *n.index);
          out << ']';
        } else if constexpr (std::is_same_v<T, Neg>) {
          out << '-';
          print_wrapped(out, *n.operand, precedence(*n.operand) < 3);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const int p = precedence(e);
          const int lp = precedence(*n.lhs);
          const int rp = precedence(*n.rhs);
          if (n.op == BinOp::Pow) {
            print_wrapped(out, *n.lhs, lp <= 4);
            out << "**";
            print_wrapped(out, *n.rhs, rp < 3);
          } else {
            print_wrapped(out, *n.lhs, lp < p);
            out << (n.op == BinOp::Add ? " + " : n.op == BinOp::Sub ? " - " : " * ");
            print_wrapped(out, *n.rhs, rp <= p);
          }
        }
      },
      e.node);
}

void print_string(std::ostream& out, const std::string& s) {
  out << '\'';
  for (char c : s) {
    if (c == '\\' || c == '\'') out << '\\';
    out << c;
  }
  out << '\'';
}

void print_arg(std::ostream& out, const Arg& a) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Expr>) {
          print_expr(out, v);
        } else if constexpr (std::is_same_v<T, StrLit>) {
          print_string(out, v.value);
        } else {
          out << '[';
          for (std::size_t i = 0; i < v.items.size(); ++i) {
            if (i) out << ", ";
            print_string(out, v.items[i]);
          }
          out << ']';
        }
      },
      a);
}

void print_block(std::ostream& out, const Block& block, int depth);

void print_stmt(std::ostream& out, const Stmt& s, int depth) {
  const std::string indent(static_cast<std::size_t>(depth) * 4, ' ');
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        out << indent;
        if constexpr (std::is_same_v<T, FunctionDef>) {
          out << "def " << n.name << '(';
          for (std::size_t i = 0; i < n.params.size(); ++i) {
            if (i) out << ", ";
            out << n.params[i];
          }
          out << "):\n";
          print_block(out, n.body, depth + 1);
        } else if constexpr (std::is_same_v<T, ForLoop>) {
          out << "for " << n.var << " in range(";
          for (std::size_t i = 0; i < n.range_args.size(); ++i) {
            if (i) out << ", ";
            print_expr(out, n.range_args[i]);
          }
          out << "):\n";
          print_block(out, n.body, depth + 1);
        } else if constexpr (std::is_same_v<T, Call>) {
          out << n.callee << '(';
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out << ", ";
            print_arg(out, n.args[i]);
          }
          out << ")\n";
        } else {
          out << n.name << " = ";
          print_arg(out, n.value);
          out << '\n';
        }
      },
      s.node);
}

void print_block(std::ostream& out, const Block& block, int depth) {
  for (const Stmt& s : block) print_stmt(out, s, depth);
}

std::size_t count_expr(const Expr& e) {
  return std::visit(
      [](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Subscript>) return 1 + count_expr(*n.index);
        else if constexpr (std::is_same_v<T, Neg>) return 1 + count_expr(*n.operand);
        else if constexpr (std::is_same_v<T, Binary>) return 1 + count_expr(*n.lhs) + count_expr(*n.rhs);
        else return 1;
      },
      e.node);
}

std::size_t count_arg(const Arg& a) {
  if (const auto* e = std::get_if<Expr>(&a)) return count_expr(*e);
  return 1;
}

std::size_t count_block(const Block& b);

std::size_t count_stmt(const Stmt& s) {
  return std::visit(
      [](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FunctionDef>) {
          return 1 + count_block(n.body);
        } else if constexpr (std::is_same_v<T, ForLoop>) {
          std::size_t total = 1 + count_block(n.body);
          for (const auto& e : n.range_args) total += count_expr(e);
          return total;
        } else if constexpr (std::is_same_v<T, Call>) {
          std::size_t total = 1;
          for (const auto& a : n.args) total += count_arg(a);
          return total;
        } else {
          return 1 + count_arg(n.value);
        }
      },
      s.node);
}

std::size_t count_block(const Block& b) {
  std::size_t total = 0;
  for (const auto& s : b) total += count_stmt(s);
  return total;
}

}  // namespace

std::string pretty_print(const Program& program) {
  std::ostringstream out;
  print_block(out, program.items, 0);
  return out.str();
}

std::string pretty_print(const FunctionDef& def) {
  std::ostringstream out;
  print_stmt(out, Stmt{def}, 0);
  return out.str();
}

std::string pretty_print(const Expr& expr) {
  std::ostringstream out;
  print_expr(out, expr);
  return out.str();
}

std::size_t count_nodes(const Program& program) { return count_block(program.items); }
std::size_t count_nodes(const FunctionDef& def) { return count_stmt(Stmt{def}); }

}  // namespace gridbench::lang
