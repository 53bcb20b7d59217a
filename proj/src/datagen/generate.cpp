#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gridbench/datagen/datagen.hpp"
#include "gridbench/lang/parser.hpp"

namespace gridbench::datagen {
namespace {

constexpr std::array<const char*, 8> kOrdinals = {"first", "second", "third", "fourth",
                                                 "fifth", "sixth", "seventh", "eighth"};

std::string shape_phrase(ShapeKind s) {
  switch (s) {
    case ShapeKind::BridgeH: return "horizontal bridge";
    case ShapeKind::BridgeV: return "vertical bridge";
    default: return std::string(to_string(s));
  }
}

std::string piece_phrase(const Piece& p) { return p.color.name() + " " + shape_phrase(p.shape); }

std::string article(const std::string& word) {
  return std::string("aeiou").find(word.front()) != std::string::npos ? "an" : "a";
}

std::string cell_phrase(Rng& rng, Coord c) {
  if (c.x == 0 && c.y == 0) return "in the top left corner";
  if (c.x == 0 && c.y == kBoardSize - 1) return "in the top right corner";
  if (c.x == kBoardSize - 1 && c.y == 0) return "in the bottom left corner";
  if (c.x == kBoardSize - 1 && c.y == kBoardSize - 1) return "in the bottom right corner";
  switch (rng.below(3)) {
    case 0: return "in row " + std::to_string(c.x + 1) + ", column " + std::to_string(c.y + 1);
    case 1:
      return std::string("in the ") + kOrdinals[c.x] + " row and " + kOrdinals[c.y] + " column";
    default:
      return "at the cell in row " + std::to_string(c.x + 1) + " and column " +
             std::to_string(c.y + 1);
  }
}

std::string direction_phrase(int dx, int dy) {
  const std::string vert = dx < 0 ? "above" : dx > 0 ? "below" : "";
  const std::string horiz = dy < 0 ? "to the left of" : dy > 0 ? "to the right of" : "";
  if (vert.empty()) return horiz;
  if (horiz.empty()) return vert;
  return "diagonally " + vert + " and " + horiz;
}
std::string initials(const ObjectSpec& spec) {
  std::string out;
  for (const auto& p : spec.parts) {
    switch (p.shape) {
      case ShapeKind::Washer: out += 'w'; break;
      case ShapeKind::Screw: out += 's'; break;
      case ShapeKind::Nut: out += 'n'; break;
      case ShapeKind::BridgeH: out += 'h'; break;
      case ShapeKind::BridgeV: out += 'v'; break;
    }
  }
  return out;
}

std::string offset_expr(const char* var, int d) {
  return d == 0 ? std::string(var) : std::string(var) + " + " + std::to_string(d);
}

/// def <name>(board, colors, x, y): one put per part.
std::string function_source(const std::string& name, const ObjectSpec& spec) {
  std::ostringstream out;
  out << "def " << name << "(board, colors, x, y):\n";
  for (std::size_t i = 0; i < spec.parts.size(); ++i) {
    const auto& p = spec.parts[i];
    out << "    put(board, '" << to_string(p.shape) << "', colors[" << i << "], "
        << offset_expr("x", p.dx) << ", " << offset_expr("y", p.dy) << ")\n";
  }
  return out.str();
}

std::string colors_literal(const ObjectSpec& spec) {
  std::string out = "[";
  for (std::size_t i = 0; i < spec.parts.size(); ++i) {
    if (i) out += ", ";
    out += "'" + spec.parts[i].color.name() + "'";
  }
  return out + "]";
}

std::string docstring(const ObjectSpec& spec) {
  std::string out = "Places ";
  for (std::size_t i = 0; i < spec.parts.size(); ++i) {
    const auto& p = spec.parts[i];
    if (i) out += i + 1 == spec.parts.size() ? " and " : ", ";
    out += std::string(to_string(p.shape)) + "(colors[" + std::to_string(i) + "]) at (" +
           offset_expr("x", p.dx) + ", " + offset_expr("y", p.dy) + ")";
  }
  return out + ".";
}

std::string canonical(const std::string& source) {
  auto program = lang::parse(source);
  if (!program) throw std::logic_error("generator emitted bad code: " + program.error().to_string());
  return lang::pretty_print(*program);
}

/// Where each part goes, relative to the cell of the first part. Clause 0 is
/// empty; the caller locates the first part.
std::vector<std::string> part_clauses(const ObjectSpec& spec, Coord anchor) {
  std::vector<std::string> out;
  Board board = new_board();
  const auto& first = spec.parts.front();
  const std::string first_name = piece_phrase({first.shape, first.color, true});
  for (std::size_t i = 0; i < spec.parts.size(); ++i) {
    const auto& part = spec.parts[i];
    const Coord at{anchor.x + part.dx, anchor.y + part.dy};
    const std::string rel = direction_phrase(part.dx - first.dx, part.dy - first.dy);
    std::string clause;
    if (i == 0) {
      // located by the caller
    } else if (is_bridge(part.shape)) {
      const Coord other = bridge_partner(part.shape, at);
      clause = "on top of the " + piece_phrase(board.at(at).back()) + " and the " +
               piece_phrase(board.at(other).back());
    } else if (!board.at(at).empty()) {
      clause = "on top of the " + piece_phrase(board.at(at).back());
      if (!rel.empty()) clause += " " + rel + " the first " + first_name;
    } else {
      clause = rel + " the " + (i > 1 ? "first " : "") + first_name;
    }
    out.push_back(clause);
    if (auto err = board.try_place(part.shape, part.color, at, Rules::defaults())) {
      throw std::logic_error("object spec is not legal: " + err->detail);
    }
  }
  return out;
}

std::string with_article(const ObjectPart& p) {
  return article(p.color.name()) + " " + piece_phrase({p.shape, p.color, true});
}

Coord first_cell(const ObjectSpec& spec, Coord anchor) {
  return {anchor.x + spec.parts.front().dx, anchor.y + spec.parts.front().dy};
}

std::vector<std::string> stepwise_sentences(Rng& rng, const ObjectSpec& spec, Coord anchor) {
  const auto clauses = part_clauses(spec, anchor);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < spec.parts.size(); ++i) {
    const std::string what = with_article(spec.parts[i]);
    if (i == 0) {
      out.push_back((rng.chance(0.5) ? "Place " : "Put ") + what + " " +
                    cell_phrase(rng, first_cell(spec, anchor)) + ".");
    } else {
      const char* verb = clauses[i].rfind("on top", 0) == 0 && rng.chance(0.5) ? "Stack " : "Place ";
      out.push_back(verb + what + " " + clauses[i] + ".");
    }
  }
  return out;
}

/// Composition phrase for a regular-board object.
std::string object_phrase(const ObjectSpec& spec) {
  const auto clauses = part_clauses(spec, {0, 0});
  std::string out;
  for (std::size_t i = 0; i < spec.parts.size(); ++i) {
    if (i) out += i + 1 == spec.parts.size() ? " and " : ", ";
    out += with_article(spec.parts[i]);
    if (i) out += " " + clauses[i];
  }
  return out;
}

std::string count_word(int n) {
  static const std::array<const char*, 9> words = {"zero", "one",   "two",   "three", "four",
                                                   "five", "six",   "seven", "eight"};
  return n >= 0 && n < static_cast<int>(words.size()) ? words[n] : std::to_string(n);
}

std::vector<std::string> pattern_sentences(Rng& rng, const RegularPattern& pat) {
  std::vector<std::string> out;
  const Coord start = first_cell(pat.object, {pat.row_start, pat.col_start});
  out.push_back("Build an object made of " + object_phrase(pat.object) + ", with the " +
                piece_phrase({pat.object.parts.front().shape, pat.object.parts.front().color, true}) +
                " " + cell_phrase(rng, start) + ".");
  if (pat.col_count > 1) {
    out.push_back("Repeat it " + count_word(pat.col_count) + " times in total along the row, " +
                  std::to_string(pat.col_step) + " columns apart.");
  }
  if (pat.row_count > 1) {
    const std::string unit = pat.col_count > 1 ? "Do the same for " : "Repeat it in ";
    out.push_back(unit + count_word(pat.row_count) + " rows, " + std::to_string(pat.row_step) +
                  " rows apart" + (pat.col_count > 1 ? "." : ", keeping the same column."));
  }
  return out;
}

std::string join_sentences(const std::vector<std::string>& s) {
  std::string out;
  for (const auto& x : s) out += (out.empty() ? "" : " ") + x;
  return out;
}

TaskInstance finish(BoardType type, std::vector<std::string> sentences, std::string gold_code,
                    std::optional<protocol::ComboDef> combo, int n_shapes,
                    const GenOptions& options) {
  TaskInstance t;
  t.board_type = type;
  t.instruction_type = protocol::InstructionType::Synthetic;
  t.turns = options.multi_turn ? sentences : std::vector<std::string>{join_sentences(sentences)};
  t.gold_code = std::move(gold_code);
  t.combo = std::move(combo);
  t.n_shapes = n_shapes;
  t.origin = "regenerated";
  auto board = protocol::execute_gold(t);
  if (!board) throw std::logic_error("generated task is not self-consistent: " + board.error());
  t.gold_board = std::move(*board);
  t.id = task_id(type, t.gold_code, protocol::instruction_text(t));
  return t;
}

}  // namespace

int ObjectSpec::rows() const {
  int r = 0;
  for (const auto& p : parts) r = std::max(r, p.dx + (p.shape == ShapeKind::BridgeV ? 2 : 1));
  return r;
}

int ObjectSpec::columns() const {
  int c = 0;
  for (const auto& p : parts) c = std::max(c, p.dy + (p.shape == ShapeKind::BridgeH ? 2 : 1));
  return c;
}

bool ObjectSpec::legal_at(Coord anchor, const Rules& rules) const {
  Board board = new_board();
  for (const auto& p : parts) {
    if (board.try_place(p.shape, p.color, {anchor.x + p.dx, anchor.y + p.dy}, rules)) return false;
  }
  return true;
}

ObjectSpec random_object(Rng& rng, int n_shapes, const Rules& rules) {
  if (n_shapes < kMinShapes || n_shapes > kMaxShapes) {
    throw std::invalid_argument("objects have 2 to 5 shapes");
  }
  ObjectSpec spec;
  Board scratch = new_board();
  for (int i = 0; i < n_shapes; ++i) {
    struct Candidate {
      ShapeKind shape;
      int dx, dy;
    };
    std::vector<Candidate> legal;
    for (ShapeKind s : kAllShapes) {
      for (int dx = 0; dx < 2; ++dx) {
        for (int dy = 0; dy < 2; ++dy) {
          if (s == ShapeKind::BridgeH && dy != 0) continue;
          if (s == ShapeKind::BridgeV && dx != 0) continue;
          if (!place(scratch, s, Color(rules.colors.front()), {dx, dy}, rules)) continue;
          legal.push_back({s, dx, dy});
        }
      }
    }
    // A washer on the floor is always legal, so `legal` is never empty.
    const Candidate c = rng.pick(legal);
    const Color color(rng.pick(rules.colors));
    scratch.try_place(c.shape, color, {c.dx, c.dy}, rules);
    spec.parts.push_back({c.shape, color, c.dx, c.dy});
  }
  return spec;
}

std::vector<Coord> RegularPattern::anchors() const {
  std::vector<Coord> out;
  for (int r = 0; r < row_count; ++r) {
    for (int c = 0; c < col_count; ++c) {
      out.push_back({row_start + r * row_step, col_start + c * col_step});
    }
  }
  return out;
}

std::string task_id(BoardType type, const std::string& gold_code, const std::string& instruction) {
  const std::string prefix = type == BoardType::Simple ? "sb-" : "rb-";
  return prefix + sha256_hex(std::string(protocol::to_string(type)) + "\n" + gold_code + "\n" +
                             instruction)
                      .substr(0, 16);
}

TaskInstance gen_simple(std::uint64_t seed, int n_shapes, const GenOptions& options) {
  Rng rng(seed);
  const ObjectSpec spec = random_object(rng, n_shapes);
  // Anchors are sampled inside the board rather than clamped.
  const Coord anchor{rng.between(0, kBoardSize - spec.rows()),
                     rng.between(0, kBoardSize - spec.columns())};
  const std::string name = initials(spec);
  const std::string code = canonical(function_source(name, spec) + name + "(board, " +
                                     colors_literal(spec) + ", " + std::to_string(anchor.x) +
                                     ", " + std::to_string(anchor.y) + ")\n");
  return finish(BoardType::Simple, stepwise_sentences(rng, spec, anchor), code, std::nullopt,
                n_shapes, options);
}

TaskInstance gen_regular(std::uint64_t seed, int n_shapes, const GenOptions& options) {
  Rng rng(seed);
  RegularPattern pat;
  pat.object = random_object(rng, n_shapes);
  const int rows = pat.object.rows();
  const int cols = pat.object.columns();

  // Steps never drop below the footprint, so copies cannot overlap.
  auto axis = [&](int extent, int& start, int& count, int& step) {
    step = rng.between(extent, extent + 2);
    const int max_count = (kBoardSize - extent) / step + 1;
    count = rng.between(std::min(2, max_count), max_count);
    start = rng.between(0, kBoardSize - extent - (count - 1) * step);
  };
  const auto loops = rng.below(3);  // 0: columns only, 1: rows only, 2: both
  axis(rows, pat.row_start, pat.row_count, pat.row_step);
  axis(cols, pat.col_start, pat.col_count, pat.col_step);
  if (loops == 0) {
    pat.row_count = 1;
  } else if (loops == 1) {
    pat.col_count = 1;
  }
  return regular_task(pat, rng.below(~0ULL), options);
}

TaskInstance regular_task(const RegularPattern& pat, std::uint64_t phrase_seed,
                          const GenOptions& options) {
  if (pat.anchors().size() < 2) throw std::invalid_argument("regular pattern needs two copies");
  for (const Coord a : pat.anchors()) {
    if (a.x < 0 || a.y < 0 || a.x + pat.object.rows() > kBoardSize ||
        a.y + pat.object.columns() > kBoardSize) {
      throw std::invalid_argument("regular pattern leaves the board");
    }
  }
  if ((pat.row_count > 1 && pat.row_step < pat.object.rows()) ||
      (pat.col_count > 1 && pat.col_step < pat.object.columns())) {
    throw std::invalid_argument("regular pattern copies overlap");
  }
  Rng rng(phrase_seed);
  const std::string name = initials(pat.object);
  const std::string colors = colors_literal(pat.object);
  auto range = [](int start, int count, int step) {
    return "range(" + std::to_string(start) + ", " + std::to_string(start + (count - 1) * step + 1) +
           ", " + std::to_string(step) + ")";
  };
  std::string usage;
  if (pat.row_count > 1 && pat.col_count > 1) {
    usage = "for i in " + range(pat.row_start, pat.row_count, pat.row_step) + ":\n" +
            "    for j in " + range(pat.col_start, pat.col_count, pat.col_step) + ":\n" +
            "        " + name + "(board, " + colors + ", i, j)\n";
  } else if (pat.row_count > 1) {
    usage = "for i in " + range(pat.row_start, pat.row_count, pat.row_step) + ":\n    " + name +
            "(board, " + colors + ", i, " + std::to_string(pat.col_start) + ")\n";
  } else {
    usage = "for j in " + range(pat.col_start, pat.col_count, pat.col_step) + ":\n    " + name +
            "(board, " + colors + ", " + std::to_string(pat.row_start) + ", j)\n";
  }

  auto def_program = lang::parse(function_source(name, pat.object));
  if (!def_program) throw std::logic_error("generator emitted a bad combo");
  protocol::ComboDef combo{std::get<lang::FunctionDef>(def_program->items.front().node),
                           docstring(pat.object)};
  return finish(BoardType::Regular, pattern_sentences(rng, pat), canonical(usage),
                std::move(combo), static_cast<int>(pat.object.parts.size()), options);
}

DatasetSplits generate_splits(BoardType type, SplitCounts counts, std::uint64_t seed,
                              const GenOptions& options) {
  DatasetSplits out;
  std::set<std::string> ids, texts;
  std::uint64_t stream = 0;
  int produced = 0;
  const int total = counts.total();
  const int attempt_cap = total * 50 + 1000;
  for (int attempt = 0; produced < total; ++attempt) {
    if (attempt >= attempt_cap) {
      throw std::runtime_error("could not produce enough distinct tasks");
    }
    const int n = kMinShapes + produced % (kMaxShapes - kMinShapes + 1);
    const std::uint64_t s = mix_seed(seed, stream++);
    TaskInstance t = type == BoardType::Simple ? gen_simple(s, n, options) : gen_regular(s, n, options);
    if (!ids.insert(t.id).second) continue;
    if (!texts.insert(protocol::instruction_text(t)).second) continue;
    auto& split = produced < counts.train                      ? out.train
                  : produced < counts.train + counts.validation ? out.validation
                                                                : out.test;
    split.push_back(std::move(t));
    ++produced;
  }
  return out;
}

}  // namespace gridbench::datagen
