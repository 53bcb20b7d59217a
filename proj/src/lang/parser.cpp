#include "gridbench/lang/parser.hpp"

#include <array>
#include <cctype>
#include <limits>

namespace gridbench::lang {
namespace {

enum class Tok {
  Name, Int, String, LParen, RParen, LBracket, RBracket, Comma, Colon, Equals,
  Plus, Minus, Star, StarStar, Newline, Indent, Dedent, End,
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t value = 0;
  SourceSpan span;
};

constexpr std::array<std::string_view, 30> kForbiddenWords = {
    "import", "from",   "if",     "elif",   "else",  "while",    "return", "lambda",
    "class",  "with",   "try",    "except", "finally", "pass",   "break",  "continue",
    "and",    "or",     "not",    "is",     "None",  "True",     "False",  "global",
    "nonlocal", "del",  "yield",  "assert", "raise", "async"};

struct Failure {
  ParseError error;
};

[[noreturn]] void fail(SourceSpan at, std::string message) {
  throw Failure{ParseError{at.line, at.column, std::move(message)}};
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::vector<int> indents{0};
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= src_.size()) {
      std::size_t eol = src_.find('\n', pos);
      if (eol == std::string_view::npos) eol = src_.size();
      std::string_view line = src_.substr(pos, eol - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      lex_line(line, line_no, indents, out);
      if (eol == src_.size()) break;
      pos = eol + 1;
    }
    const SourceSpan end{line_no + 1, 1};
    while (indents.size() > 1) {
      indents.pop_back();
      out.push_back({Tok::Dedent, "", 0, end});
    }
    out.push_back({Tok::End, "", 0, end});
    return out;
  }

 private:
  void lex_line(std::string_view line, int line_no, std::vector<int>& indents,
                std::vector<Token>& out) {
    std::size_t i = 0;
    while (i < line.size() && line[i] == ' ') ++i;
    if (i < line.size() && line[i] == '\t') fail({line_no, static_cast<int>(i) + 1}, "tabs are not allowed for indentation");
    if (i == line.size()) return;  // blank line
    const int width = static_cast<int>(i);
    if (width % 4 != 0) fail({line_no, 1}, "indentation must be a multiple of 4 spaces");
    const int level = width / 4;
    if (level > indents.back()) {
      if (level != indents.back() + 1) fail({line_no, 1}, "unexpected indentation");
      indents.push_back(level);
      out.push_back({Tok::Indent, "", 0, {line_no, 1}});
    } else {
      while (level < indents.back()) {
        indents.pop_back();
        out.push_back({Tok::Dedent, "", 0, {line_no, 1}});
      }
      if (level != indents.back()) fail({line_no, 1}, "inconsistent dedent");
    }

    while (i < line.size()) {
      const char c = line[i];
      const SourceSpan at{line_no, static_cast<int>(i) + 1};
      if (c == ' ') {
        ++i;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < line.size() &&
               (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) {
          ++j;
        }
        std::string word(line.substr(i, j - i));
        for (auto w : kForbiddenWords) {
          if (w == word) fail(at, "'" + word + "' is not part of the placement language");
        }
        out.push_back({Tok::Name, std::move(word), 0, at});
        i = j;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::int64_t v = 0;
        std::size_t j = i;
        while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) {
          const int d = line[j] - '0';
          if (v > (std::numeric_limits<std::int64_t>::max() - d) / 10) {
            fail(at, "integer literal too large");
          }
          v = v * 10 + d;
          ++j;
        }
        if (j < line.size() &&
            (std::isalpha(static_cast<unsigned char>(line[j])) || line[j] == '_' || line[j] == '.')) {
          fail({line_no, static_cast<int>(j) + 1}, "malformed number");
        }
        out.push_back({Tok::Int, std::string(line.substr(i, j - i)), v, at});
        i = j;
        continue;
      }
      if (c == '\'' || c == '"') {
        std::string value;
        std::size_t j = i + 1;
        bool closed = false;
        while (j < line.size()) {
          if (line[j] == '\\') {
            if (j + 1 >= line.size()) break;
            const char e = line[j + 1];
            if (e != '\\' && e != '\'' && e != '"') {
              fail({line_no, static_cast<int>(j) + 1}, "unsupported escape sequence");
            }
            value.push_back(e);
            j += 2;
            continue;
          }
          if (line[j] == c) {
            closed = true;
            ++j;
            break;
          }
          value.push_back(line[j]);
          ++j;
        }
        if (!closed) fail(at, "unterminated string literal");
        out.push_back({Tok::String, std::move(value), 0, at});
        i = j;
        continue;
      }
      Tok kind;
      std::size_t len = 1;
      switch (c) {
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '[': kind = Tok::LBracket; break;
        case ']': kind = Tok::RBracket; break;
        case ',': kind = Tok::Comma; break;
        case ':': kind = Tok::Colon; break;
        case '=':
          if (i + 1 < line.size() && line[i + 1] == '=') fail(at, "comparisons are not supported");
          kind = Tok::Equals;
          break;
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '*':
          if (i + 1 < line.size() && line[i + 1] == '*') {
            kind = Tok::StarStar;
            len = 2;
          } else {
            kind = Tok::Star;
          }
          break;
        case '#': fail(at, "comments are not permitted");
        case '.': fail(at, "attribute access is not supported");
        default: fail(at, std::string("unexpected character '") + c + "'");
      }
      out.push_back({kind, std::string(line.substr(i, len)), 0, at});
      i += len;
    }
    out.push_back({Tok::Newline, "", 0, {line_no, static_cast<int>(line.size()) + 1}});
  }

  std::string_view src_;
};

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::Name: return "identifier";
    case Tok::Int: return "integer";
    case Tok::String: return "string";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Equals: return "'='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::StarStar: return "'**'";
    case Tok::Newline: return "end of line";
    case Tok::Indent: return "indent";
    case Tok::Dedent: return "dedent";
    case Tok::End: return "end of input";
  }
  return "token";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program p;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Indent) fail(peek().span, "unexpected indentation");
      p.items.push_back(statement(/*allow_def=*/true));
    }
    return p;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) {
      fail(peek().span, "expected " + std::string(what) + ", found " +
                            std::string(describe(peek().kind)));
    }
    return advance();
  }

  void end_of_statement() {
    if (peek().kind == Tok::End) return;
    expect(Tok::Newline, "end of line");
  }

  Stmt statement(bool allow_def) {
    const Token& t = peek();
    if (t.kind != Tok::Name) {
      fail(t.span, "expected a statement, found " + std::string(describe(t.kind)));
    }
    if (t.text == "def") {
      if (!allow_def) fail(t.span, "nested function definitions are not supported");
      return Stmt{function_def()};
    }
    if (t.text == "for") return Stmt{for_loop()};
    if (t.text == "in" || t.text == "range") fail(t.span, "unexpected '" + t.text + "'");
    if (peek(1).kind == Tok::LParen) {
      Call c = call();
      end_of_statement();
      return Stmt{std::move(c)};
    }
    if (peek(1).kind == Tok::Equals) {
      Assign a;
      a.span = t.span;
      a.name = advance().text;
      advance();
      a.value = argument();
      end_of_statement();
      return Stmt{std::move(a)};
    }
    fail(peek(1).span, "expected '(' or '=' after '" + t.text + "'");
  }

  Block block() {
    expect(Tok::Colon, "':'");
    expect(Tok::Newline, "end of line after ':'");
    expect(Tok::Indent, "an indented block");
    Block body;
    while (peek().kind != Tok::Dedent && peek().kind != Tok::End) {
      body.push_back(statement(/*allow_def=*/false));
    }
    if (peek().kind == Tok::Dedent) advance();
    return body;
  }

  std::string identifier(std::string_view what) {
    const Token& t = expect(Tok::Name, what);
    if (t.text == "def" || t.text == "for" || t.text == "in") {
      fail(t.span, "'" + t.text + "' cannot be used as a name");
    }
    return t.text;
  }

  FunctionDef function_def() {
    FunctionDef def;
    def.span = advance().span;  // 'def'
    def.name = identifier("function name");
    expect(Tok::LParen, "'('");
    def.params.push_back(identifier("parameter name"));
    while (peek().kind == Tok::Comma) {
      advance();
      def.params.push_back(identifier("parameter name"));
    }
    expect(Tok::RParen, "')'");
    def.body = block();
    return def;
  }

  ForLoop for_loop() {
    ForLoop loop;
    loop.span = advance().span;  // 'for'
    loop.var = identifier("loop variable");
    const Token& in = expect(Tok::Name, "'in'");
    if (in.text != "in") fail(in.span, "expected 'in'");
    const Token& range = expect(Tok::Name, "'range'");
    if (range.text != "range") fail(range.span, "loops may only iterate over range(...)");
    expect(Tok::LParen, "'('");
    loop.range_args.push_back(expr());
    while (peek().kind == Tok::Comma) {
      advance();
      if (loop.range_args.size() == 3) fail(peek().span, "range takes at most 3 arguments");
      loop.range_args.push_back(expr());
    }
    expect(Tok::RParen, "')'");
    loop.body = block();
    return loop;
  }

  Call call() {
    Call c;
    c.span = peek().span;
    c.callee = identifier("function name");
    expect(Tok::LParen, "'('");
    c.args.push_back(argument());
    while (peek().kind == Tok::Comma) {
      advance();
      c.args.push_back(argument());
    }
    expect(Tok::RParen, "')'");
    return c;
  }

  Arg argument() {
    if (peek().kind == Tok::String) return StrLit{advance().text};
    if (peek().kind == Tok::LBracket) {
      advance();
      ListLit list;
      list.items.push_back(expect(Tok::String, "string in list").text);
      while (peek().kind == Tok::Comma) {
        advance();
        list.items.push_back(expect(Tok::String, "string in list").text);
      }
      expect(Tok::RBracket, "']'");
      return list;
    }
    return expr();
  }

  Expr expr() {
    Expr lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token& op = advance();
      Expr rhs = term();
      lhs = Expr{Binary{op.kind == Tok::Plus ? BinOp::Add : BinOp::Sub, std::move(lhs),
                        std::move(rhs)},
                 op.span};
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (peek().kind == Tok::Star) {
      const Token& op = advance();
      Expr rhs = unary();
      lhs = Expr{Binary{BinOp::Mul, std::move(lhs), std::move(rhs)}, op.span};
    }
    return lhs;
  }

  Expr unary() {
    if (peek().kind == Tok::Minus) {
      const SourceSpan at = advance().span;
      return Expr{Neg{unary()}, at};
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (peek().kind == Tok::StarStar) {
      const SourceSpan at = advance().span;
      Expr exponent = unary();
      return Expr{Binary{BinOp::Pow, std::move(base), std::move(exponent)}, at};
    }
    return base;
  }

  Expr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int:
        advance();
        return Expr{IntLit{t.value}, t.span};
      case Tok::Name: {
        std::string name = identifier("name");
        if (peek().kind == Tok::LParen) fail(peek().span, "calls are not allowed inside expressions");
        if (peek().kind == Tok::LBracket) {
          advance();
          Expr index = expr();
          expect(Tok::RBracket, "']'");
          return Expr{Subscript{std::move(name), std::move(index)}, t.span};
        }
        return Expr{NameRef{std::move(name)}, t.span};
      }
      case Tok::LParen: {
        advance();
        Expr inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail(t.span, "expected an expression, found " + std::string(describe(t.kind)));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string ParseError::to_string() const {
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}

Expected<Program, ParseError> parse(std::string_view source) {
  try {
    Lexer lexer(source);
    Parser parser(lexer.run());
    return parser.program();
  } catch (Failure& f) {
    return unexpected(std::move(f.error));
  }
}

}  // namespace gridbench::lang
