#include "gridbench/lang/interpreter.hpp"

#include <cstdlib>
#include <limits>

namespace gridbench::lang {
namespace {

struct Halt {
  RuntimeErrorReport report;
};

[[noreturn]] void halt(ErrorCategory cat, SourceSpan at, std::string detail) {
  throw Halt{RuntimeErrorReport{cat, at, std::move(detail)}};
}

struct Scope {
  std::map<std::string, Value, std::less<>> vars;
  const Scope* parent = nullptr;

  const Value* find(std::string_view name) const {
    for (const Scope* s = this; s; s = s->parent) {
      if (auto it = s->vars.find(name); it != s->vars.end()) return &it->second;
    }
    return nullptr;
  }
};

class Machine {
 public:
  Machine(const ComboTable& combos, const ExecBudget& budget, World& world)
      : combos_(combos), budget_(budget), world_(world) {
    for (const auto& [name, value] : world.globals) globals_.vars.emplace(name, value);
  }

  void run(const Program& program) { exec_block(program.items, globals_, 0); }

 private:
  std::int64_t expect_int(const Value& v, SourceSpan at, std::string_view what) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
    halt(ErrorCategory::ValueError, at,
         std::string(what) + " must be an integer, got " + std::string(type_name(v)));
  }

  std::int64_t eval_int(const Expr& e, const Scope& scope) {
    return expect_int(eval(e, scope), e.span, "operand");
  }

  Value eval(const Expr& e, const Scope& scope) {
    return std::visit(
        [&](const auto& n) -> Value {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, NameRef>) {
            const Value* v = scope.find(n.name);
            if (!v) halt(ErrorCategory::UndefinedName, e.span, "name '" + n.name + "' is not defined");
            return *v;
          } else if constexpr (std::is_same_v<T, Subscript>) {
            const Value* v = scope.find(n.name);
            if (!v) halt(ErrorCategory::UndefinedName, e.span, "name '" + n.name + "' is not defined");
            const auto* list = std::get_if<StringList>(v);
            if (!list) {
              halt(ErrorCategory::ValueError, e.span,
                   "'" + n.name + "' of type " + std::string(type_name(*v)) + " is not indexable");
            }
            std::int64_t i = eval_int(*n.index, scope);
            const auto size = static_cast<std::int64_t>(list->size());
            if (i < 0) i += size;
            if (i < 0 || i >= size) {
              halt(ErrorCategory::UnknownKey, e.span,
                   "index " + std::to_string(i) + " out of range for '" + n.name + "'");
            }
            return (*list)[static_cast<std::size_t>(i)];
          } else if constexpr (std::is_same_v<T, Neg>) {
            const std::int64_t v = eval_int(*n.operand, scope);
            if (v == std::numeric_limits<std::int64_t>::min()) {
              halt(ErrorCategory::ValueError, e.span, "integer overflow");
            }
            return -v;
          } else {
            const std::int64_t a = eval_int(*n.lhs, scope);
            const std::int64_t b = eval_int(*n.rhs, scope);
            std::int64_t r = 0;
            bool overflow = false;
            switch (n.op) {
              case BinOp::Add: overflow = __builtin_add_overflow(a, b, &r); break;
              case BinOp::Sub: overflow = __builtin_sub_overflow(a, b, &r); break;
              case BinOp::Mul: overflow = __builtin_mul_overflow(a, b, &r); break;
              case BinOp::Pow: {
                if (b < 0) halt(ErrorCategory::ValueError, e.span, "negative exponent");
                r = 1;
                for (std::int64_t k = 0; k < b && !overflow; ++k) {
                  overflow = __builtin_mul_overflow(r, a, &r);
                  if (r == 0 || r == 1) break;
                }
                if (!overflow && r == 1 && a == -1 && (b % 2 == 1)) r = -1;
                break;
              }
            }
            if (overflow) halt(ErrorCategory::ValueError, e.span, "integer overflow");
            return r;
          }
        },
        e.node);
  }

  Value eval_arg(const Arg& a, const Scope& scope) {
    if (const auto* e = std::get_if<Expr>(&a)) return eval(*e, scope);
    if (const auto* s = std::get_if<StrLit>(&a)) return s->value;
    return std::get<ListLit>(a).items;
  }

  void tick_iteration(SourceSpan at) {
    if (++iterations_ > budget_.max_iterations) {
      halt(ErrorCategory::BudgetExceeded, at,
           "loop iterations exceed budget of " + std::to_string(budget_.max_iterations));
    }
  }

  void exec_block(const Block& block, Scope& scope, int call_depth) {
    for (const Stmt& s : block) exec_stmt(s, scope, call_depth);
  }

  void exec_stmt(const Stmt& s, Scope& scope, int call_depth) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, FunctionDef>) {
            functions_[n.name] = &n;
          } else if constexpr (std::is_same_v<T, Assign>) {
            scope.vars[n.name] = eval_arg(n.value, scope);
          } else if constexpr (std::is_same_v<T, ForLoop>) {
            exec_loop(n, scope, call_depth);
          } else {
            exec_call(n, scope, call_depth);
          }
        },
        s.node);
  }

  void exec_loop(const ForLoop& loop, const Scope& scope, int call_depth) {
    std::int64_t start = 0, stop = 0, step = 1;
    if (loop.range_args.size() == 1) {
      stop = eval_int(loop.range_args[0], scope);
    } else {
      start = eval_int(loop.range_args[0], scope);
      stop = eval_int(loop.range_args[1], scope);
      if (loop.range_args.size() == 3) step = eval_int(loop.range_args[2], scope);
    }
    if (step == 0) halt(ErrorCategory::ValueError, loop.span, "range() step must not be zero");
    for (std::int64_t i = start; step > 0 ? i < stop : i > stop;) {
      tick_iteration(loop.span);
      Scope body{{}, &scope};
      body.vars.emplace(loop.var, i);
      exec_block(loop.body, body, call_depth);
      if (__builtin_add_overflow(i, step, &i)) break;
    }
  }

  void exec_call(const Call& call, const Scope& scope, int call_depth) {
    std::vector<Value> args;
    args.reserve(call.args.size());
    for (const Arg& a : call.args) args.push_back(eval_arg(a, scope));

    if (auto it = world_.builtins.find(call.callee); it != world_.builtins.end()) {
      if (++placements_ > budget_.max_placements) {
        halt(ErrorCategory::BudgetExceeded, call.span,
             "placements exceed budget of " + std::to_string(budget_.max_placements));
      }
      if (auto err = it->second(args)) halt(err->category, call.span, err->detail);
      return;
    }

    const FunctionDef* def = nullptr;
    if (auto it = functions_.find(call.callee); it != functions_.end()) {
      def = it->second;
    } else if (auto c = combos_.find(call.callee); c != combos_.end()) {
      def = &c->second;
    }
    if (!def) {
      halt(ErrorCategory::UndefinedName, call.span, "function '" + call.callee + "' is not defined");
    }
    if (def->params.size() != args.size()) {
      halt(ErrorCategory::ArityError, call.span,
           "'" + call.callee + "' takes " + std::to_string(def->params.size()) +
               " arguments but " + std::to_string(args.size()) + " were given");
    }
    if (call_depth + 1 > budget_.max_call_depth) {
      halt(ErrorCategory::BudgetExceeded, call.span, "call depth exceeds budget");
    }
    Scope frame{{}, &globals_};
    for (std::size_t i = 0; i < args.size(); ++i) frame.vars[def->params[i]] = std::move(args[i]);
    exec_block(def->body, frame, call_depth + 1);
  }

  const ComboTable& combos_;
  const ExecBudget& budget_;
  World& world_;
  Scope globals_;
  std::map<std::string, const FunctionDef*, std::less<>> functions_;
  std::int64_t iterations_ = 0;
  std::int64_t placements_ = 0;
};

}  // namespace

std::string_view type_name(const Value& v) noexcept {
  switch (v.index()) {
    case 0: return "int";
    case 1: return "str";
    case 2: return "list";
    case 3: return "board";
  }
  return "?";
}

std::optional<RuntimeErrorReport> run(const Program& program, const ComboTable& combos,
                                      const ExecBudget& budget, World& world) {
  std::size_t nodes = count_nodes(program);
  for (const auto& [name, def] : combos) nodes += count_nodes(def);
  if (static_cast<std::int64_t>(nodes) > budget.max_ast_nodes) {
    return RuntimeErrorReport{ErrorCategory::BudgetExceeded, {1, 1},
                              "program has " + std::to_string(nodes) + " nodes, budget is " +
                                  std::to_string(budget.max_ast_nodes)};
  }
  try {
    Machine m(combos, budget, world);
    m.run(program);
  } catch (Halt& h) {
    return std::move(h.report);
  }
  return std::nullopt;
}

Builtin make_put_builtin(Board& board, const Rules& rules) {
  return [&board, &rules](std::span<const Value> args) -> std::optional<BuiltinError> {
    if (args.size() != 5) {
      return BuiltinError{ErrorCategory::ArityError,
                          "put takes 5 arguments (board, shape, color, x, y) but " +
                              std::to_string(args.size()) + " were given"};
    }
    if (!std::holds_alternative<BoardHandle>(args[0])) {
      return BuiltinError{ErrorCategory::ValueError, "first argument of put must be the board"};
    }
    const auto* shape_name = std::get_if<std::string>(&args[1]);
    const auto* color_name = std::get_if<std::string>(&args[2]);
    if (!shape_name || !color_name) {
      return BuiltinError{ErrorCategory::ValueError, "shape and color must be strings"};
    }
    const auto* x = std::get_if<std::int64_t>(&args[3]);
    const auto* y = std::get_if<std::int64_t>(&args[4]);
    if (!x || !y) {
      return BuiltinError{ErrorCategory::ValueError, "coordinates must be integers"};
    }
    const auto shape = parse_shape(*shape_name);
    if (!shape) return BuiltinError{ErrorCategory::UnknownKey, "unknown shape '" + *shape_name + "'"};
    if (std::llabs(*x) > kMaxCoordinateMagnitude || std::llabs(*y) > kMaxCoordinateMagnitude) {
      return BuiltinError{ErrorCategory::ValueError,
                          "coordinate (" + std::to_string(*x) + ", " + std::to_string(*y) +
                              ") is not a valid cell index"};
    }
    const Coord at{static_cast<int>(*x), static_cast<int>(*y)};
    if (auto err = board.try_place(*shape, Color(*color_name), at, rules)) {
      return BuiltinError{err->category, err->detail};
    }
    return std::nullopt;
  };
}

Expected<Board, RuntimeErrorReport> execute(const Program& program, const ComboTable& combos,
                                            const ExecBudget& budget, const Rules& rules) {
  Board board;
  World world;
  world.builtins.emplace("put", make_put_builtin(board, rules));
  world.globals.emplace("board", BoardHandle{});
  if (auto err = run(program, combos, budget, world)) return unexpected(std::move(*err));
  return board;
}

}  // namespace gridbench::lang
