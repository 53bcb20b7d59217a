#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace gridbench::lang {

struct SourceSpan {
  int line = 0;
  int column = 0;
};

/// Deep-copying owning pointer so recursive AST nodes keep value semantics.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

struct Expr;

struct IntLit {
  std::int64_t value = 0;  // always non-negative; negation is a Neg node
  friend bool operator==(const IntLit&, const IntLit&) = default;
};

struct NameRef {
  std::string name;
  friend bool operator==(const NameRef&, const NameRef&) = default;
};

struct Subscript {
  std::string name;
  Box<Expr> index;
  friend bool operator==(const Subscript&, const Subscript&) = default;
};

struct Neg {
  Box<Expr> operand;
  friend bool operator==(const Neg&, const Neg&) = default;
};

enum class BinOp { Add, Sub, Mul, Pow };

struct Binary {
  BinOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;
  friend bool operator==(const Binary&, const Binary&) = default;
};

/// Integer expression. Spans are ignored by equality so that comparisons are
/// structural.
struct Expr {
  std::variant<IntLit, NameRef, Subscript, Neg, Binary> node;
  SourceSpan span;

  friend bool operator==(const Expr& a, const Expr& b) { return a.node == b.node; }
};

struct StrLit {
  std::string value;
  friend bool operator==(const StrLit&, const StrLit&) = default;
};

struct ListLit {
  std::vector<std::string> items;
  friend bool operator==(const ListLit&, const ListLit&) = default;
};

/// Call argument or assignment right-hand side.
using Arg = std::variant<Expr, StrLit, ListLit>;

struct Call {
  std::string callee;
  std::vector<Arg> args;
  SourceSpan span;
  friend bool operator==(const Call& a, const Call& b) {
    return a.callee == b.callee && a.args == b.args;
  }
};

struct Assign {
  std::string name;
  Arg value;
  SourceSpan span;
  friend bool operator==(const Assign& a, const Assign& b) {
    return a.name == b.name && a.value == b.value;
  }
};

struct Stmt;
using Block = std::vector<Stmt>;

struct ForLoop {
  std::string var;
  std::vector<Expr> range_args;  // 1 to 3 entries, as written
  Block body;
  SourceSpan span;
  friend bool operator==(const ForLoop& a, const ForLoop& b);
};

struct FunctionDef {
  std::string name;
  std::vector<std::string> params;  // params[0] is the board handle
  Block body;
  SourceSpan span;
  friend bool operator==(const FunctionDef& a, const FunctionDef& b);
};

struct Stmt {
  std::variant<FunctionDef, ForLoop, Call, Assign> node;
  friend bool operator==(const Stmt&, const Stmt&) = default;
};

inline bool operator==(const ForLoop& a, const ForLoop& b) {
  return a.var == b.var && a.range_args == b.range_args && a.body == b.body;
}

inline bool operator==(const FunctionDef& a, const FunctionDef& b) {
  return a.name == b.name && a.params == b.params && a.body == b.body;
}

struct Program {
  Block items;
  friend bool operator==(const Program&, const Program&) = default;
};

/// Node count used by the AST-size budget.
std::size_t count_nodes(const Program& program);
std::size_t count_nodes(const FunctionDef& def);

}  // namespace gridbench::lang
