#include "gridbench/adapters/adapters.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "gridbench/lang/parser.hpp"
#include "gridbench/lang/validate.hpp"
#include "gridbench/protocol/response.hpp"
#include "gridbench/util.hpp"

namespace gridbench::adapters {
namespace {

using nlohmann::json;
using lang::BuiltinError;
using lang::Value;

constexpr const char* kBlank = "white";

bool is_identifier(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::optional<BuiltinError> two_strings(std::span<const Value> args, const char* what,
                                        const std::string** a, const std::string** b) {
  if (args.size() != 2) {
    return BuiltinError{ErrorCategory::ArityError,
                        std::string(what) + " takes 2 arguments but " +
                            std::to_string(args.size()) + " were given"};
  }
  *a = std::get_if<std::string>(&args[0]);
  *b = std::get_if<std::string>(&args[1]);
  if (!*a || !*b) return BuiltinError{ErrorCategory::ValueError, std::string(what) + " takes strings"};
  return std::nullopt;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::optional<std::string> unique_names(const std::vector<std::string>& names, const char* what) {
  std::set<std::string_view> seen;
  for (const auto& n : names) {
    if (n.empty()) return std::string(what) + " names must be non-empty";
    if (!seen.insert(n).second) return std::string("duplicate ") + what + " '" + n + "'";
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Domain d) noexcept {
  return d == Domain::Hexagons ? "hexagons" : "tidybot";
}

std::optional<Domain> parse_domain(std::string_view s) noexcept {
  if (s == "hexagons") return Domain::Hexagons;
  if (s == "tidybot") return Domain::TidyBot;
  return std::nullopt;
}

// ---------------------------------------------------------------- hexagons

const std::optional<Color>& HexGrid::at(int row, int column) const {
  return cells_.at(static_cast<std::size_t>(row * kColumns + column));
}

void HexGrid::set(int row, int column, Color color) {
  auto& cell = cells_.at(static_cast<std::size_t>(row * kColumns + column));
  if (color.name() == kBlank) {
    cell.reset();
  } else {
    cell = std::move(color);
  }
}

std::size_t HexGrid::painted() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](const auto& c) { return c.has_value(); }));
}

const std::vector<std::string>& hex_palette() {
  static const std::vector<std::string> kPalette{"white", "black",  "red",    "green",
                                                 "blue",  "yellow", "purple", "orange"};
  return kPalette;
}

Expected<HexGrid, BuiltinError> hex_paint(const HexGrid& grid, std::string_view color,
                                          std::int64_t row, std::int64_t column) {
  if (!contains(hex_palette(), color)) {
    return unexpected(BuiltinError{ErrorCategory::UnknownKey,
                                   "unknown color '" + std::string(color) + "'"});
  }
  if (row < 0 || row >= HexGrid::kRows || column < 0 || column >= HexGrid::kColumns) {
    return unexpected(BuiltinError{
        ErrorCategory::DimensionMismatch,
        "cell (" + std::to_string(row) + ", " + std::to_string(column) + ") is outside the " +
            std::to_string(HexGrid::kRows) + "x" + std::to_string(HexGrid::kColumns) + " grid"});
  }
  HexGrid out = grid;
  out.set(static_cast<int>(row), static_cast<int>(column), Color(color));
  return out;
}

std::vector<HexDiff> hex_compare(const HexGrid& gold, const HexGrid& actual) {
  std::vector<HexDiff> out;
  for (int r = 0; r < HexGrid::kRows; ++r) {
    for (int c = 0; c < HexGrid::kColumns; ++c) {
      if (gold.at(r, c) != actual.at(r, c)) out.push_back({r, c, gold.at(r, c), actual.at(r, c)});
    }
  }
  return out;
}

json hex_to_document(const HexGrid& grid) {
  json cells = json::array();
  for (int r = 0; r < HexGrid::kRows; ++r) {
    for (int c = 0; c < HexGrid::kColumns; ++c) {
      if (const auto& color = grid.at(r, c)) {
        cells.push_back({{"row", r}, {"column", c}, {"color", color->name()}});
      }
    }
  }
  return {{"cells", cells}};
}

Expected<HexGrid, std::string> hex_from_document(const json& doc) {
  if (!doc.is_object() || !doc.contains("cells") || !doc["cells"].is_array()) {
    return unexpected(std::string("hexagons state needs a 'cells' array"));
  }
  HexGrid grid;
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  for (const auto& cell : doc["cells"]) {
    if (!cell.is_object() || !cell.contains("row") || !cell["row"].is_number_integer() ||
        !cell.contains("column") || !cell["column"].is_number_integer() ||
        !cell.contains("color") || !cell["color"].is_string()) {
      return unexpected(std::string("cell entries need integer row/column and a string color"));
    }
    const auto r = cell["row"].get<std::int64_t>();
    const auto c = cell["column"].get<std::int64_t>();
    if (!seen.insert({r, c}).second) {
      return unexpected("cell (" + std::to_string(r) + ", " + std::to_string(c) +
                        ") listed twice");
    }
    auto painted = hex_paint(grid, cell["color"].get<std::string>(), r, c);
    if (!painted) return unexpected(painted.error().detail);
    grid = std::move(*painted);
  }
  return grid;
}

lang::Builtin make_paint_builtin(HexGrid& grid) {
  return [&grid](std::span<const Value> args) -> std::optional<BuiltinError> {
    if (args.size() != 3) {
      return BuiltinError{ErrorCategory::ArityError,
                          "paint takes 3 arguments (color, row, column) but " +
                              std::to_string(args.size()) + " were given"};
    }
    const auto* color = std::get_if<std::string>(&args[0]);
    if (!color) return BuiltinError{ErrorCategory::ValueError, "color must be a string"};
    const auto* row = std::get_if<std::int64_t>(&args[1]);
    const auto* column = std::get_if<std::int64_t>(&args[2]);
    if (!row || !column) return BuiltinError{ErrorCategory::ValueError, "row and column must be integers"};
    auto next = hex_paint(grid, *color, *row, *column);
    if (!next) return next.error();
    grid = std::move(*next);
    return std::nullopt;
  };
}

// ---------------------------------------------------------------- tidybot

std::optional<std::string> check_scene(const TidyScene& scene) {
  if (auto bad = unique_names(scene.objects, "object")) return bad;
  if (auto bad = unique_names(scene.receptacles, "receptacle")) return bad;
  for (const auto& [item, where] : scene.placement) {
    if (!contains(scene.objects, item)) return "placed item '" + item + "' is not in the scene";
    if (!contains(scene.receptacles, where)) {
      return "receptacle '" + where + "' is not in the scene";
    }
  }
  return std::nullopt;
}

Expected<TidyScene, BuiltinError> tidy_pick_and_place(const TidyScene& scene,
                                                      std::string_view item,
                                                      std::string_view newposition) {
  if (!contains(scene.objects, item)) {
    return unexpected(
        BuiltinError{ErrorCategory::UnknownKey, "unknown item '" + std::string(item) + "'"});
  }
  if (!contains(scene.receptacles, newposition)) {
    return unexpected(BuiltinError{ErrorCategory::UnknownKey,
                                   "unknown receptacle '" + std::string(newposition) + "'"});
  }
  TidyScene out = scene;
  out.placement[std::string(item)] = std::string(newposition);
  return out;
}

std::vector<TidyDiff> tidy_compare(const TidyScene& gold, const TidyScene& actual) {
  std::set<std::string> items;
  for (const auto& [k, v] : gold.placement) items.insert(k);
  for (const auto& [k, v] : actual.placement) items.insert(k);
  std::vector<TidyDiff> out;
  for (const auto& item : items) {
    std::optional<std::string> g, a;
    if (auto it = gold.placement.find(item); it != gold.placement.end()) g = it->second;
    if (auto it = actual.placement.find(item); it != actual.placement.end()) a = it->second;
    if (g != a) out.push_back({item, g, a});
  }
  return out;
}

json tidy_to_document(const TidyScene& scene) {
  return {{"objects", scene.objects},
          {"receptacles", scene.receptacles},
          {"placement", json(scene.placement)}};
}

Expected<TidyScene, std::string> tidy_from_document(const json& doc) {
  TidyScene scene;
  try {
    scene.objects = doc.at("objects").get<std::vector<std::string>>();
    scene.receptacles = doc.at("receptacles").get<std::vector<std::string>>();
    scene.placement = doc.value("placement", json::object()).get<std::map<std::string, std::string>>();
  } catch (const json::exception&) {
    return unexpected(std::string(
        "tidybot state needs string lists 'objects' and 'receptacles' and a string map 'placement'"));
  }
  if (auto bad = check_scene(scene)) return unexpected(*bad);
  return scene;
}

lang::Builtin make_pick_and_place_builtin(TidyScene& scene) {
  return [&scene](std::span<const Value> args) -> std::optional<BuiltinError> {
    const std::string* item = nullptr;
    const std::string* where = nullptr;
    if (auto err = two_strings(args, "pick_and_place", &item, &where)) return err;
    auto next = tidy_pick_and_place(scene, *item, *where);
    if (!next) return next.error();
    scene = std::move(*next);
    return std::nullopt;
  };
}

// ---------------------------------------------------------------- tasks

GoldState initial_state(const AdapterTask& task) {
  if (task.domain == Domain::Hexagons) return HexGrid{};
  TidyScene scene = std::get<TidyScene>(task.gold);
  scene.placement.clear();
  return scene;
}

Expected<GoldState, Verdict> execute_adapter(const AdapterTask& task, const std::string& code,
                                             const lang::ExecBudget& budget) {
  auto program = lang::parse(code);
  if (!program) {
    return unexpected(Verdict::abort(protocol::AbortReason::ExtraProse, program.error().to_string()));
  }
  const std::string builtin = task.domain == Domain::Hexagons ? "paint" : "pick_and_place";
  lang::ValidationContext ctx;
  ctx.mode = lang::ValidationMode::Script;
  ctx.builtins = {builtin};
  if (auto bad = lang::validate(*program, ctx)) {
    return unexpected(protocol::verdict_from_validation(*bad));
  }

  GoldState state = initial_state(task);
  lang::World world;
  // Vocabulary words are also bound as names so unquoted forms resolve.
  auto bind = [&](const std::vector<std::string>& words) {
    for (const auto& w : words) {
      if (is_identifier(w)) world.globals.emplace(w, Value{w});
    }
  };
  if (auto* grid = std::get_if<HexGrid>(&state)) {
    world.builtins.emplace(builtin, make_paint_builtin(*grid));
    bind(hex_palette());
  } else {
    auto& scene = std::get<TidyScene>(state);
    world.builtins.emplace(builtin, make_pick_and_place_builtin(scene));
    bind(scene.objects);
    bind(scene.receptacles);
  }
  if (auto err = lang::run(*program, {}, budget, world)) {
    return unexpected(Verdict::exec_error(err->category, err->detail));
  }
  return state;
}

std::size_t state_diff_count(const GoldState& gold, const GoldState& actual) {
  if (gold.index() != actual.index()) throw std::invalid_argument("states of different domains");
  if (const auto* g = std::get_if<HexGrid>(&gold)) {
    return hex_compare(*g, std::get<HexGrid>(actual)).size();
  }
  return tidy_compare(std::get<TidyScene>(gold), std::get<TidyScene>(actual)).size();
}

Verdict score_adapter(const AdapterTask& task, const std::string& code,
                      const lang::ExecBudget& budget) {
  auto state = execute_adapter(task, code, budget);
  if (!state) return state.error();
  return Verdict::executed(state_diff_count(task.gold, *state));
}

std::string adapter_prompt(const AdapterTask& task) {
  std::string out;
  if (task.domain == Domain::Hexagons) {
    out += "You are drawing on a hexagonal grid of 10 rows (0-9) and 18 columns (0-17).\n";
    out += "Every cell starts white.\n";
    out += "Available colors: " + join(hex_palette(), ", ") + "\n";
    out += "- Use `paint(color, row, column)` to color one cell. Painting a cell again replaces "
           "its color.\n";
  } else {
    const auto& scene = std::get<TidyScene>(task.gold);
    out += "You are tidying a room by moving objects into receptacles.\n";
    out += "Objects: " + join(scene.objects, ", ") + "\n";
    out += "Receptacles: " + join(scene.receptacles, ", ") + "\n";
    out += "- Use `pick_and_place(item, newposition)` to put an object into a receptacle.\n";
  }
  out += "- Names are quoted strings. `for i in range(...)` loops are allowed.\n";
  out += "Reply with a line containing only `Output:` followed by the code, and nothing else.\n";
  out += "\nInstruction:\n" + task.instruction + "\n";
  return out;
}

EpisodeRecord run_adapter_episode(const AdapterTask& task, const AdapterOptions& options,
                                  llm::ChatProvider& model) {
  const auto t0 = std::chrono::steady_clock::now();
  EpisodeRecord rec;
  rec.task_id = task.id;
  rec.model = model.model_id();
  rec.style = "direct";
  rec.board_type = std::string(to_string(task.domain));
  rec.instruction_type = "human";
  rec.domain = std::string(to_string(task.domain));
  rec.prompt = adapter_prompt(task);
  rec.prompt_sha256 = sha256_hex(rec.prompt);

  auto finish = [&](Verdict v) {
    rec.verdict = std::move(v);
    rec.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return rec;
  };

  const std::vector<llm::ChatMessage> messages{{"user", rec.prompt}};
  auto reply = model.complete(messages, {task.id, 0});
  if (!reply) {
    return finish(Verdict::abort(protocol::AbortReason::ProviderFailure,
                                 std::string(llm::to_string(reply.error().kind)) + ": " +
                                     reply.error().detail));
  }
  rec.responses.push_back(*reply);
  auto parsed = protocol::parse_response(*reply, protocol::BoardType::Regular, options.strict);
  if (!parsed) return finish(Verdict::abort(parsed.error()));
  return finish(score_adapter(task, parsed->code(), options.budget));
}

// ---------------------------------------------------------------- dataset io

json adapter_task_to_json(const AdapterTask& task) {
  json state = task.domain == Domain::Hexagons ? hex_to_document(std::get<HexGrid>(task.gold))
                                               : tidy_to_document(std::get<TidyScene>(task.gold));
  return {{"id", task.id},
          {"domain", to_string(task.domain)},
          {"instruction", task.instruction},
          {"gold_code", task.gold_code},
          {"gold_state", std::move(state)},
          {"origin", task.origin}};
}

Expected<AdapterTask, datagen::SchemaError> adapter_task_from_json(const json& j, int line) {
  auto fail = [line](std::string field, std::string message) {
    return unexpected(datagen::SchemaError{line, std::move(field), std::move(message)});
  };
  if (!j.is_object()) return fail("", "record must be an object");
  auto str = [&](const char* field) -> const json* {
    auto it = j.find(field);
    return it != j.end() && it->is_string() ? &*it : nullptr;
  };
  AdapterTask task;
  for (const char* f : {"id", "domain", "instruction", "gold_code"}) {
    if (!str(f)) return fail(f, "required string");
  }
  task.id = j["id"].get<std::string>();
  auto domain = parse_domain(j["domain"].get<std::string>());
  if (!domain) return fail("domain", "must be hexagons or tidybot");
  task.domain = *domain;
  task.instruction = j["instruction"].get<std::string>();
  task.gold_code = j["gold_code"].get<std::string>();
  if (!lang::parse(task.gold_code)) return fail("gold_code", "does not parse");
  if (!j.contains("gold_state")) return fail("gold_state", "required");
  if (task.domain == Domain::Hexagons) {
    auto grid = hex_from_document(j["gold_state"]);
    if (!grid) return fail("gold_state", grid.error());
    task.gold = std::move(*grid);
  } else {
    auto scene = tidy_from_document(j["gold_state"]);
    if (!scene) return fail("gold_state", scene.error());
    task.gold = std::move(*scene);
  }
  if (const json* origin = str("origin")) task.origin = origin->get<std::string>();
  return task;
}

Expected<std::vector<AdapterTask>, datagen::SchemaError> read_adapter_dataset(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) return unexpected(datagen::SchemaError{0, "", "cannot open " + path});
  std::vector<AdapterTask> out;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (trim(text).empty()) continue;
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) return unexpected(datagen::SchemaError{line, "", "invalid JSON"});
    auto task = adapter_task_from_json(j, line);
    if (!task) return unexpected(task.error());
    out.push_back(std::move(*task));
  }
  return out;
}

}  // namespace gridbench::adapters
