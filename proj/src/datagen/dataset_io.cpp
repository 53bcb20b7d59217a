#include <fstream>

#include "gridbench/board_document.hpp"
#include "gridbench/datagen/datagen.hpp"
#include "gridbench/lang/parser.hpp"

namespace gridbench::datagen {

using nlohmann::json;

std::string SchemaError::to_string() const {
  std::string out = line > 0 ? "line " + std::to_string(line) + ": " : std::string();
  if (!field.empty()) out += "field '" + field + "': ";
  return out + message;
}

json task_to_json(const TaskInstance& t) {
  json j = {{"id", t.id},
            {"board_type", protocol::to_string(t.board_type)},
            {"instruction_type", protocol::to_string(t.instruction_type)},
            {"turns", t.turns},
            {"gold_code", t.gold_code}};
  if (t.combo) {
    lang::Program body{t.combo->def.body};
    j["combo"] = {{"name", t.combo->def.name},
                  {"params", t.combo->def.params},
                  {"body", lang::pretty_print(body)},
                  {"docstring", t.combo->docstring}};
  }
  j["gold_board"] = to_document(t.gold_board);
  j["n_shapes"] = t.n_shapes;
  j["origin"] = t.origin;
  return j;
}

namespace {

Expected<protocol::ComboDef, std::string> combo_from_json(const json& c) {
  if (!c.is_object()) return unexpected(std::string("must be an object"));
  for (const char* f : {"name", "params", "body", "docstring"}) {
    if (!c.contains(f)) return unexpected("missing '" + std::string(f) + "'");
  }
  if (!c["name"].is_string() || !c["params"].is_array() || !c["body"].is_string() ||
      !c["docstring"].is_string()) {
    return unexpected(std::string("name/body/docstring must be strings, params a list"));
  }
  std::string src = "def " + c["name"].get<std::string>() + "(";
  bool first = true;
  for (const auto& p : c["params"]) {
    if (!p.is_string()) return unexpected(std::string("params must be strings"));
    src += (first ? "" : ", ") + p.get<std::string>();
    first = false;
  }
  src += "):\n";
  for (const auto& line : split_lines(c["body"].get<std::string>())) {
    if (!trim(line).empty()) src += "    " + line + "\n";
  }
  auto program = lang::parse(src);
  if (!program) return unexpected("body does not parse: " + program.error().to_string());
  if (program->items.size() != 1 ||
      !std::holds_alternative<lang::FunctionDef>(program->items.front().node)) {
    return unexpected(std::string("body must form a single definition"));
  }
  return protocol::ComboDef{std::get<lang::FunctionDef>(program->items.front().node),
                            c["docstring"].get<std::string>()};
}

}  // namespace

Expected<TaskInstance, SchemaError> task_from_json(const json& j, int line) {
  auto fail = [line](std::string field, std::string msg) {
    return unexpected(SchemaError{line, std::move(field), std::move(msg)});
  };
  if (!j.is_object()) return fail("", "record must be a JSON object");
  for (const char* f : {"id", "board_type", "instruction_type", "turns", "gold_code",
                        "gold_board", "n_shapes", "origin"}) {
    if (!j.contains(f)) return fail(f, "missing");
  }
  TaskInstance t;
  if (!j["id"].is_string()) return fail("id", "must be a string");
  t.id = j["id"].get<std::string>();

  auto bt = j["board_type"].is_string()
                ? protocol::parse_board_type(j["board_type"].get<std::string>())
                : std::nullopt;
  if (!bt) return fail("board_type", "must be \"simple\" or \"regular\"");
  t.board_type = *bt;
  auto it = j["instruction_type"].is_string()
                ? protocol::parse_instruction_type(j["instruction_type"].get<std::string>())
                : std::nullopt;
  if (!it) return fail("instruction_type", "must be \"synthetic\" or \"human\"");
  t.instruction_type = *it;

  if (!j["turns"].is_array() || j["turns"].empty()) return fail("turns", "must be a non-empty list");
  for (const auto& turn : j["turns"]) {
    if (!turn.is_string()) return fail("turns", "entries must be strings");
    t.turns.push_back(turn.get<std::string>());
  }
  if (!j["gold_code"].is_string()) return fail("gold_code", "must be a string");
  t.gold_code = j["gold_code"].get<std::string>();
  if (!lang::parse(t.gold_code)) return fail("gold_code", "does not parse");

  if (j.contains("combo") && !j["combo"].is_null()) {
    auto combo = combo_from_json(j["combo"]);
    if (!combo) return fail("combo", combo.error());
    t.combo = std::move(*combo);
  }
  if (t.board_type == protocol::BoardType::Regular && !t.combo) {
    return fail("combo", "regular-board tasks carry their combo");
  }
  auto board = from_document(j["gold_board"]);
  if (!board) return fail("gold_board", board.error());
  t.gold_board = std::move(*board);
  if (!j["n_shapes"].is_number_integer()) return fail("n_shapes", "must be an integer");
  t.n_shapes = j["n_shapes"].get<int>();
  if (!j["origin"].is_string()) return fail("origin", "must be a string");
  t.origin = j["origin"].get<std::string>();
  return t;
}

Expected<std::size_t, std::string> write_dataset(const std::vector<TaskInstance>& tasks,
                                                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return unexpected("cannot write " + path);
  for (const auto& t : tasks) out << task_to_json(t).dump() << '\n';
  out.flush();
  if (!out) return unexpected("write failed for " + path);
  return tasks.size();
}

Expected<std::vector<TaskInstance>, SchemaError> read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return unexpected(SchemaError{0, "", "cannot open " + path});
  std::vector<TaskInstance> tasks;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) return unexpected(SchemaError{lineno, "", "not valid JSON"});
    auto t = task_from_json(j, lineno);
    if (!t) return unexpected(t.error());
    tasks.push_back(std::move(*t));
  }
  return tasks;
}

}  // namespace gridbench::datagen
