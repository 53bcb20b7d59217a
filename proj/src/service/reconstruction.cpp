#include "gridbench/service/reconstruction.hpp"

#include <fstream>

#include "gridbench/board_document.hpp"
#include "gridbench/lang/parser.hpp"
#include "gridbench/lang/validate.hpp"
#include "gridbench/metrics/metrics.hpp"
#include "gridbench/util.hpp"

namespace gridbench::service {
namespace {

using nlohmann::json;
using protocol::Verdict;

Reply error(int status, std::string message) { return {status, {{"error", std::move(message)}}}; }

Expected<ReconstructionSubmission, std::string> parse_submission(const json& body) {
  if (!body.is_object()) return unexpected(std::string("body must be a JSON object"));
  ReconstructionSubmission s;
  for (const char* f : {"task_id", "annotator_id", "script"}) {
    if (!body.contains(f) || !body[f].is_string()) {
      return unexpected("field '" + std::string(f) + "' must be a string");
    }
  }
  s.task_id = body["task_id"];
  s.annotator_id = body["annotator_id"];
  s.script = body["script"];
  if (trim(s.annotator_id).empty()) return unexpected(std::string("annotator_id is empty"));
  if (!body.contains("duration") || !body["duration"].is_number() || body["duration"] < 0) {
    return unexpected(std::string("field 'duration' must be a non-negative number"));
  }
  s.duration = body["duration"].get<double>();
  return s;
}

/// Scripts must be flat-or-looped `put` calls; errors here are client errors.
std::optional<std::string> check_script(const std::string& script) {
  auto program = lang::parse(script);
  if (!program) return program.error().to_string();
  lang::ValidationContext ctx;
  ctx.mode = lang::ValidationMode::Script;
  if (auto bad = lang::validate(*program, ctx)) {
    return std::string(lang::to_string(bad->rule)) + ": " + bad->detail;
  }
  return std::nullopt;
}

json palette_json() {
  const Rules& rules = Rules::defaults();
  json shapes = json::array();
  for (ShapeKind s : kAllShapes) shapes.push_back(to_string(s));
  return {{"shapes", shapes}, {"colors", rules.colors}};
}

}  // namespace

json StoredReconstruction::to_json() const {
  return {{"schema", kReconstructionSchema},
          {"task_id", submission.task_id},
          {"annotator_id", submission.annotator_id},
          {"script", submission.script},
          {"duration", submission.duration},
          {"verdict", verdict.to_json()}};
}

ReconstructionService::ReconstructionService(std::vector<protocol::TaskInstance> tasks,
                                             std::string store_path)
    : tasks_(std::move(tasks)), store_path_(std::move(store_path)) {
  for (std::size_t i = 0; i < tasks_.size(); ++i) index_.emplace(tasks_[i].id, i);
}

Expected<std::unique_ptr<ReconstructionService>, std::string> ReconstructionService::open(
    std::vector<protocol::TaskInstance> tasks, std::string store_path) {
  std::unique_ptr<ReconstructionService> svc(
      new ReconstructionService(std::move(tasks), std::move(store_path)));
  std::ifstream in(svc->store_path_);
  std::string line;
  int number = 0;
  while (in && std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    const std::string where = svc->store_path_ + ":" + std::to_string(number) + ": ";
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || j.value("schema", std::string()) != kReconstructionSchema) {
      return unexpected(where + "not a reconstruction record");
    }
    auto sub = parse_submission(j);
    if (!sub) return unexpected(where + sub.error());
    auto verdict = Verdict::from_json(j.value("verdict", json()));
    if (!verdict) return unexpected(where + verdict.error());
    const auto* task = svc->find(sub->task_id);
    if (!task) return unexpected(where + "unknown task '" + sub->task_id + "'");
    if (svc->score(*task, sub->script) != *verdict) {
      return unexpected(where + "stored verdict does not match a re-score of the script");
    }
    const auto key = std::make_pair(sub->task_id, sub->annotator_id);
    if (svc->by_key_.contains(key)) return unexpected(where + "duplicate submission");
    svc->by_key_.emplace(key, svc->records_.size());
    svc->records_.push_back({std::move(*sub), *verdict});
  }
  return svc;
}

const protocol::TaskInstance* ReconstructionService::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &tasks_[it->second];
}

Verdict ReconstructionService::score(const protocol::TaskInstance& task,
                                     const std::string& script) const {
  return protocol::score_code(script, lang::ValidationMode::Script, {}, task.gold_board);
}

std::size_t ReconstructionService::stored() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

Reply ReconstructionService::next_task(const std::string& annotator) const {
  if (trim(annotator).empty()) return error(400, "query parameter 'annotator' is required");
  std::lock_guard lock(mu_);
  for (const auto& task : tasks_) {
    if (by_key_.contains({task.id, annotator})) continue;
    std::size_t done = 0;
    for (const auto& [key, i] : by_key_) done += key.second == annotator;
    return {200,
            {{"task_id", task.id},
             {"board_type", protocol::to_string(task.board_type)},
             {"instruction", protocol::instruction_text(task)},
             {"palette", palette_json()},
             {"board", {{"rows", kBoardSize}, {"columns", kBoardSize}}},
             {"progress", {{"done", done}, {"total", tasks_.size()}}}}};
  }
  return error(404, "no unreconstructed tasks left for annotator '" + annotator + "'");
}

Reply ReconstructionService::submit(const json& body) {
  auto sub = parse_submission(body);
  if (!sub) return error(400, sub.error());
  const auto* task = find(sub->task_id);
  if (!task) return error(404, "unknown task '" + sub->task_id + "'");
  if (auto bad = check_script(sub->script)) return error(400, "invalid script: " + *bad);
  const Verdict verdict = score(*task, sub->script);

  std::lock_guard lock(mu_);
  const auto key = std::make_pair(sub->task_id, sub->annotator_id);
  if (by_key_.contains(key)) {
    return error(409, "task '" + sub->task_id + "' was already reconstructed by '" +
                          sub->annotator_id + "'");
  }
  StoredReconstruction rec{std::move(*sub), verdict};
  std::ofstream out(store_path_, std::ios::app | std::ios::binary);
  out << rec.to_json().dump() << '\n';
  out.flush();
  if (!out) return error(500, "cannot append to the submission store");
  by_key_.emplace(key, records_.size());
  records_.push_back(std::move(rec));
  return {201, {{"task_id", key.first}, {"annotator_id", key.second}, {"verdict", verdict.to_json()}}};
}

Reply ReconstructionService::results() const {
  std::vector<protocol::EpisodeRecord> episodes;
  {
    std::lock_guard lock(mu_);
    for (const auto& r : records_) {
      const auto* task = find(r.submission.task_id);
      protocol::EpisodeRecord e;
      e.task_id = r.submission.task_id;
      e.model = "human";
      e.style = "ui";
      e.board_type = std::string(protocol::to_string(task->board_type));
      e.instruction_type = std::string(protocol::to_string(task->instruction_type));
      e.n_shapes = task->n_shapes;
      e.responses = {r.submission.script};
      e.verdict = r.verdict;
      e.latency_ms = static_cast<std::int64_t>(r.submission.duration * 1000);
      episodes.push_back(std::move(e));
    }
  }
  if (episodes.empty()) return {200, {{"submissions", 0}, {"overall", nullptr}, {"by_board_type", json::array()}}};
  json by_type = json::array();
  const auto groups = metrics::group_reports(episodes, {"board_type"});
  for (const auto& g : *groups) by_type.push_back(g.to_json());
  return {200,
          {{"submissions", episodes.size()},
           {"overall", metrics::summarize(episodes)->to_json()},
           {"by_board_type", std::move(by_type)}}};
}

Reply ReconstructionService::execute(const json& body) const {
  if (!body.is_object() || !body.contains("code") || !body["code"].is_string()) {
    return error(400, "field 'code' must be a string");
  }
  if (!body.contains("gold_board")) return error(400, "field 'gold_board' is required");
  auto gold = from_document(body["gold_board"]);
  if (!gold) return error(400, "gold_board: " + gold.error());
  auto mode = lang::ValidationMode::Script;
  lang::ComboTable combos;
  if (body.contains("task_id")) {
    if (!body["task_id"].is_string()) return error(400, "field 'task_id' must be a string");
    const auto* task = find(body["task_id"]);
    if (!task) return error(404, "unknown task");
    combos = protocol::combo_table(*task);
    if (body.value("as_answer", false)) {
      mode = task->board_type == protocol::BoardType::Simple ? lang::ValidationMode::SimpleBoard
                                                             : lang::ValidationMode::RegularBoard;
    }
  }
  const Verdict v = protocol::score_code(body["code"], mode, combos, *gold);
  return {200, {{"verdict", v.to_json()}}};
}

}  // namespace gridbench::service
