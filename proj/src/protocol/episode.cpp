#include "gridbench/protocol/episode.hpp"

#include <chrono>

#include "gridbench/lang/parser.hpp"
#include "gridbench/util.hpp"

namespace gridbench::protocol {

using nlohmann::json;

Verdict Verdict::abort(AbortReason r, std::string detail) {
  Verdict v;
  v.kind = Kind::Abort;
  v.reason = r;
  v.detail = std::move(detail);
  return v;
}

Verdict Verdict::exec_error(ErrorCategory c, std::string detail) {
  Verdict v;
  v.kind = Kind::ExecError;
  v.category = c;
  v.detail = std::move(detail);
  return v;
}

Verdict Verdict::executed(std::size_t diffs) {
  Verdict v;
  v.kind = Kind::Executed;
  v.matched = diffs == 0;
  v.diff_count = diffs;
  return v;
}

std::string_view to_string(Verdict::Kind k) noexcept {
  switch (k) {
    case Verdict::Kind::Abort: return "abort";
    case Verdict::Kind::ExecError: return "exec_error";
    case Verdict::Kind::Executed: return "executed";
  }
  return "?";
}

json Verdict::to_json() const {
  json j = {{"kind", to_string(kind)}};
  switch (kind) {
    case Kind::Abort: j["reason"] = to_string(reason); break;
    case Kind::ExecError: j["category"] = to_string(category); break;
    case Kind::Executed:
      j["matched"] = matched;
      j["diff_count"] = diff_count;
      break;
  }
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

Expected<Verdict, std::string> Verdict::from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    return unexpected(std::string("verdict needs a kind"));
  }
  const std::string kind = j["kind"].get<std::string>();
  const std::string detail = j.value("detail", std::string());
  if (kind == "abort") {
    auto r = parse_abort_reason(j.value("reason", std::string()));
    if (!r) return unexpected(std::string("abort verdict with unknown reason"));
    return abort(*r, detail);
  }
  if (kind == "exec_error") {
    auto c = parse_error_category(j.value("category", std::string()));
    if (!c) return unexpected(std::string("exec_error verdict with unknown category"));
    return exec_error(*c, detail);
  }
  if (kind == "executed") {
    if (!j.contains("diff_count") || !j["diff_count"].is_number_unsigned()) {
      return unexpected(std::string("executed verdict needs diff_count"));
    }
    Verdict v = executed(j["diff_count"].get<std::size_t>());
    if (j.value("matched", v.matched) != v.matched) {
      return unexpected(std::string("matched disagrees with diff_count"));
    }
    v.detail = detail;
    return v;
  }
  return unexpected("unknown verdict kind '" + kind + "'");
}

json EpisodeRecord::to_json() const {
  json j = {{"schema", kEpisodeSchema},
            {"task_id", task_id},
            {"model", model},
            {"style", style},
            {"shots", shots},
            {"prompt_sha256", prompt_sha256}};
  if (responses.size() == 1) {
    j["response"] = responses.front();
  } else {
    j["response"] = responses;
  }
  j["verdict"] = verdict.to_json();
  j["latency_ms"] = latency_ms;
  j["board_type"] = board_type;
  j["instruction_type"] = instruction_type;
  j["domain"] = domain;
  j["n_shapes"] = n_shapes;
  return j;
}

Expected<EpisodeRecord, std::string> EpisodeRecord::from_json(const json& j) {
  if (!j.is_object()) return unexpected(std::string("episode record must be an object"));
  if (j.value("schema", std::string()) != kEpisodeSchema) {
    return unexpected("episode schema must be " + std::string(kEpisodeSchema));
  }
  EpisodeRecord r;
  try {
    r.task_id = j.at("task_id").get<std::string>();
    r.model = j.at("model").get<std::string>();
    r.style = j.at("style").get<std::string>();
    r.shots = j.value("shots", 0);
    r.prompt_sha256 = j.at("prompt_sha256").get<std::string>();
    const json& resp = j.at("response");
    if (resp.is_string()) {
      r.responses = {resp.get<std::string>()};
    } else {
      r.responses = resp.get<std::vector<std::string>>();
    }
    r.latency_ms = j.at("latency_ms").get<std::int64_t>();
    r.board_type = j.value("board_type", std::string());
    r.instruction_type = j.value("instruction_type", std::string());
    r.domain = j.value("domain", std::string("blocks"));
    r.n_shapes = j.value("n_shapes", 0);
  } catch (const json::exception& e) {
    return unexpected(std::string("episode record: ") + e.what());
  }
  auto v = Verdict::from_json(j.at("verdict"));
  if (!v) return unexpected(v.error());
  r.verdict = *v;
  return r;
}

Verdict verdict_from_validation(const lang::ConstraintViolation& v) {
  const bool undefined = v.rule == lang::ConstraintRule::MissingDefinition ||
                         v.rule == lang::ConstraintRule::UnboundCombo;
  return Verdict::exec_error(
      undefined ? ErrorCategory::UndefinedName : ErrorCategory::ConstraintViolation,
      std::string(lang::to_string(v.rule)) + ": " + v.detail);
}

Verdict score_code(const std::string& code, lang::ValidationMode mode,
                   const lang::ComboTable& combos, const Board& gold,
                   const lang::ExecBudget& budget) {
  auto program = lang::parse(code);
  if (!program) return Verdict::abort(AbortReason::ExtraProse, program.error().to_string());
  lang::ValidationContext ctx;
  ctx.mode = mode;
  for (const auto& [name, def] : combos) ctx.bound_combos.insert(name);
  if (auto bad = lang::validate(*program, ctx)) return verdict_from_validation(*bad);
  auto board = lang::execute(*program, combos, budget);
  if (!board) return Verdict::exec_error(board.error().category, board.error().detail);
  return Verdict::executed(diff_boards(gold, *board).size());
}

EpisodeRecord run_episode(const TaskInstance& task, const EpisodeOptions& options,
                          llm::ChatProvider& model) {
  const auto t0 = std::chrono::steady_clock::now();
  EpisodeRecord rec;
  rec.task_id = task.id;
  rec.model = model.model_id();
  rec.style = std::string(
      to_string(task.board_type == BoardType::Simple ? PromptVariant::FD : options.style.variant));
  rec.shots = options.style.shots;
  rec.board_type = std::string(to_string(task.board_type));
  rec.instruction_type = std::string(to_string(task.instruction_type));
  rec.n_shapes = task.n_shapes;

  auto finish = [&](Verdict v) {
    rec.verdict = std::move(v);
    rec.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return rec;
  };

  std::vector<TaskInstance> shots;
  if (options.style.shots > 0) {
    static const std::vector<TaskInstance> kNoPool;
    auto sampled = sample_few_shot(options.shot_pool ? *options.shot_pool : kNoPool, task,
                                   options.style.shots, mix_seed(options.seed, fnv1a(task.id)));
    if (!sampled) {
      // Harness misconfiguration, not a model failure; surfaced through detail.
      return finish(Verdict::abort(AbortReason::ProviderFailure,
                                   std::string(to_string(sampled.error()))));
    }
    shots = std::move(*sampled);
  }
  auto prompt = build_prompt(task, options.style, shots);
  if (!prompt) {
    return finish(Verdict::abort(AbortReason::ProviderFailure,
                                 std::string(to_string(prompt.error()))));
  }
  rec.prompt = *prompt;
  rec.prompt_sha256 = sha256_hex(rec.prompt);

  std::vector<llm::ChatMessage> messages{{"user", rec.prompt}};
  std::string code;
  std::optional<Verdict> aborted;
  const std::size_t turns = std::max<std::size_t>(task.turns.size(), 1);
  for (std::size_t turn = 0; turn < turns; ++turn) {
    if (turn > 0) messages.push_back({"user", follow_up_message(task.turns[turn])});
    auto reply = model.complete(messages, {task.id, static_cast<int>(turn)});
    if (!reply) {
      return finish(Verdict::abort(AbortReason::ProviderFailure,
                                   std::string(llm::to_string(reply.error().kind)) + ": " +
                                       reply.error().detail));
    }
    rec.responses.push_back(*reply);
    messages.push_back({"assistant", *reply});
    auto parsed = parse_response(*reply, task.board_type, options.strict);
    if (!parsed) {
      // Later turns are still collected so the log holds the whole dialogue.
      if (!aborted) aborted = Verdict::abort(parsed.error(), "turn " + std::to_string(turn + 1));
      continue;
    }
    code += parsed->code();
  }
  if (aborted) return finish(*aborted);

  const auto mode = task.board_type == BoardType::Simple ? lang::ValidationMode::SimpleBoard
                                                         : lang::ValidationMode::RegularBoard;
  return finish(score_code(code, mode, combo_table(task), task.gold_board, options.budget));
}

}  // namespace gridbench::protocol
