#include "gridbench/service/run.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "gridbench/datagen/datagen.hpp"
#include "gridbench/util.hpp"

namespace gridbench::service {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using protocol::EpisodeRecord;

constexpr const char* kProseReply =
    "The board shows a few shapes stacked near the corner, placed one after another.";

json budget_json(const lang::ExecBudget& b) {
  return {{"max_placements", b.max_placements},
          {"max_iterations", b.max_iterations},
          {"max_ast_nodes", b.max_ast_nodes},
          {"max_call_depth", b.max_call_depth}};
}

Expected<std::string, std::string> first_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in) return unexpected("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return unexpected(path + ": line is not a JSON object");
    return j.value("domain", std::string("blocks"));
  }
  return std::string("blocks");
}

}  // namespace

// ---------------------------------------------------------------- manifest

std::string RunManifest::derived_id() const {
  RunManifest copy = *this;
  copy.run_id.clear();
  copy.out_dir.clear();
  return sha256_hex(copy.to_json().dump()).substr(0, 12);
}

json RunManifest::to_json() const {
  json j{{"schema", kManifestSchema},
         {"run_id", run_id},
         {"datasets", datasets},
         {"model_config", model_config},
         {"style", protocol::to_string(style.variant)},
         {"shots", style.shots},
         {"seed", seed},
         {"strict", strict},
         {"out_dir", out_dir},
         {"budget", budget_json(budget)}};
  j["shot_pool"] = shot_pool ? json(*shot_pool) : json(nullptr);
  return j;
}

Expected<RunManifest, std::string> RunManifest::from_json(const json& j) {
  if (!j.is_object() || j.value("schema", std::string()) != kManifestSchema) {
    return unexpected("manifest schema must be " + std::string(kManifestSchema));
  }
  RunManifest m;
  try {
    m.run_id = j.value("run_id", std::string());
    m.datasets = j.at("datasets").get<std::vector<std::string>>();
    m.model_config = j.at("model_config");
    auto variant = protocol::parse_prompt_variant(j.at("style").get<std::string>());
    if (!variant) return unexpected(std::string("manifest: unknown style"));
    m.style.variant = *variant;
    m.style.shots = j.value("shots", 0);
    m.seed = j.value("seed", std::uint64_t{0});
    m.strict = j.value("strict", true);
    m.out_dir = j.value("out_dir", std::string());
    if (j.contains("shot_pool") && j["shot_pool"].is_string()) m.shot_pool = j["shot_pool"];
    if (j.contains("budget")) {
      const json& b = j["budget"];
      m.budget.max_placements = b.value("max_placements", m.budget.max_placements);
      m.budget.max_iterations = b.value("max_iterations", m.budget.max_iterations);
      m.budget.max_ast_nodes = b.value("max_ast_nodes", m.budget.max_ast_nodes);
      m.budget.max_call_depth = b.value("max_call_depth", m.budget.max_call_depth);
    }
  } catch (const json::exception& e) {
    return unexpected(std::string("manifest: ") + e.what());
  }
  return m;
}

// ---------------------------------------------------------------- tasks

std::vector<std::string> TaskSet::ids() const {
  std::vector<std::string> out;
  for (const auto& t : blocks) out.push_back(t.id);
  for (const auto& t : adapters) out.push_back(t.id);
  return out;
}

Expected<TaskSet, std::string> load_tasks(const std::vector<std::string>& paths) {
  TaskSet set;
  for (const auto& path : paths) {
    auto domain = first_domain(path);
    if (!domain) return unexpected(domain.error());
    if (*domain == "blocks") {
      auto tasks = datagen::read_dataset(path);
      if (!tasks) return unexpected(path + ": " + tasks.error().to_string());
      set.blocks.insert(set.blocks.end(), tasks->begin(), tasks->end());
    } else {
      auto tasks = adapters::read_adapter_dataset(path);
      if (!tasks) return unexpected(path + ": " + tasks.error().to_string());
      set.adapters.insert(set.adapters.end(), tasks->begin(), tasks->end());
    }
  }
  std::set<std::string> seen;
  for (const auto& id : set.ids()) {
    if (!seen.insert(id).second) return unexpected("duplicate task id '" + id + "'");
  }
  return set;
}

Expected<std::shared_ptr<llm::ChatProvider>, std::string> make_provider(
    const RunManifest& manifest, const TaskSet& tasks) {
  const json& cfg = manifest.model_config;
  if (cfg.is_object() && cfg.contains("mock")) {
    const std::string spec = cfg["mock"].get<std::string>();
    if (spec == "@prose") {
      return std::shared_ptr<llm::ChatProvider>(
          llm::MockChatProvider::constant(kProseReply, "mock-prose"));
    }
    if (spec == "@gold") {
      llm::MockChatProvider::Script script;
      for (const auto& t : tasks.blocks) {
        auto answer = protocol::reference_answer(t);
        if (!answer) return unexpected(t.id + ": " + answer.error());
        script[t.id] = {*answer};
      }
      for (const auto& t : tasks.adapters) script[t.id] = {"Output:\n" + t.gold_code};
      return std::shared_ptr<llm::ChatProvider>(
          std::make_shared<llm::MockChatProvider>(std::move(script), "mock-gold"));
    }
    auto mock = llm::MockChatProvider::from_file(spec);
    if (!mock) return unexpected(mock.error());
    const auto ids = tasks.ids();
    if (auto missing = (*mock)->missing(ids); !missing.empty()) {
      std::string list;
      for (std::size_t i = 0; i < missing.size() && i < 5; ++i) list += (i ? ", " : "") + missing[i];
      return unexpected("mock script has no responses for " + std::to_string(missing.size()) +
                        " task(s): " + list + (missing.size() > 5 ? ", ..." : ""));
    }
    return std::shared_ptr<llm::ChatProvider>(std::move(*mock));
  }
  auto config = llm::ProviderConfig::from_json(cfg);
  if (!config) return unexpected(config.error());
  auto http = std::make_shared<llm::HttpChatProvider>(*config);
  return std::shared_ptr<llm::ChatProvider>(std::make_shared<llm::RetryingChatProvider>(
      http, llm::RetryPolicy{config->max_retries, std::chrono::milliseconds(500), 2.0}));
}

// ---------------------------------------------------------------- evaluate

Expected<std::string, std::string> write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return unexpected("cannot write " + path);
  out << content;
  if (!out) return unexpected("write failed for " + path);
  return path;
}

Expected<RunResult, std::string> evaluate(const RunManifest& input, llm::ChatProvider& model,
                                          int parallelism) {
  RunManifest manifest = input;
  if (manifest.run_id.empty()) manifest.run_id = manifest.derived_id();
  if (manifest.out_dir.empty()) return unexpected(std::string("output directory is required"));

  auto tasks = load_tasks(manifest.datasets);
  if (!tasks) return unexpected(tasks.error());
  if (tasks->size() == 0) return unexpected(std::string("datasets contain no tasks"));

  std::vector<protocol::TaskInstance> pool;
  if (manifest.style.shots > 0) {
    if (manifest.shot_pool) {
      auto loaded = datagen::read_dataset(*manifest.shot_pool);
      if (!loaded) return unexpected(*manifest.shot_pool + ": " + loaded.error().to_string());
      pool = std::move(*loaded);
    } else {
      pool = tasks->blocks;
    }
    for (const auto& t : tasks->blocks) {
      if (!protocol::sample_few_shot(pool, t, manifest.style.shots, 0)) {
        return unexpected("shot pool has fewer than " + std::to_string(manifest.style.shots) +
                          " eligible examples for task " + t.id);
      }
    }
  }

  std::error_code ec;
  fs::create_directories(manifest.out_dir, ec);
  if (ec) return unexpected("cannot create " + manifest.out_dir + ": " + ec.message());
  const fs::path dir(manifest.out_dir);
  const std::string marker = (dir / kIncompleteMarker).string();
  if (auto w = write_file(marker, "run " + manifest.run_id + " in progress\n"); !w) {
    return unexpected(w.error());
  }
  if (auto w = write_file((dir / "manifest.json").string(), manifest.to_json().dump(2) + "\n"); !w) {
    return unexpected(w.error());
  }

  protocol::EpisodeOptions options;
  options.style = manifest.style;
  options.strict = manifest.strict;
  options.seed = manifest.seed;
  options.budget = manifest.budget;
  options.shot_pool = &pool;
  adapters::AdapterOptions adapter_options{manifest.strict, manifest.budget};

  const std::size_t n = tasks->size();
  std::vector<std::optional<EpisodeRecord>> slots(n);
  std::ofstream log(dir / "episodes.jsonl", std::ios::binary | std::ios::trunc);
  if (!log) return unexpected("cannot write episodes.jsonl in " + manifest.out_dir);

  // Workers fill slots; whoever completes the next unwritten index flushes,
  // so the log is in dataset order regardless of scheduling.
  std::atomic<std::size_t> next{0};
  std::mutex flush_mu;
  std::size_t written = 0;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      EpisodeRecord rec = i < tasks->blocks.size()
                              ? protocol::run_episode(tasks->blocks[i], options, model)
                              : adapters::run_adapter_episode(
                                    tasks->adapters[i - tasks->blocks.size()], adapter_options,
                                    model);
      std::lock_guard lock(flush_mu);
      slots[i] = std::move(rec);
      while (written < n && slots[written]) {
        log << slots[written]->to_json().dump() << '\n';
        ++written;
      }
      log.flush();
    }
  };
  {
    std::vector<std::jthread> workers;
    for (int w = 1; w < std::max(parallelism, 1); ++w) workers.emplace_back(work);
    work();
  }
  log.close();

  RunResult result;
  for (auto& s : slots) result.records.push_back(std::move(*s));
  auto overall = metrics::summarize(result.records);
  if (!overall) return unexpected(overall.error());
  result.overall = *overall;

  auto reports = build_reports(result.records);
  if (!reports) return unexpected(reports.error());
  for (const auto& [name, content] : reports->files) {
    if (auto w = write_file((dir / name).string(), content); !w) return unexpected(w.error());
  }
  result.notices = reports->notices;

  std::vector<std::string> lost;
  for (const auto& r : result.records) {
    if (r.verdict.kind == protocol::Verdict::Kind::Abort &&
        r.verdict.reason == protocol::AbortReason::ProviderFailure) {
      lost.push_back(r.task_id);
    }
  }
  if (lost.empty()) {
    fs::remove(marker, ec);
  } else {
    result.complete = false;
    std::string text = std::to_string(lost.size()) + " episode(s) without a model response:\n";
    for (const auto& id : lost) text += id + "\n";
    if (auto w = write_file(marker, text); !w) return unexpected(w.error());
  }
  return result;
}

// ---------------------------------------------------------------- report

Expected<std::vector<EpisodeRecord>, std::string> read_episode_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) return unexpected("cannot open " + path);
  std::vector<EpisodeRecord> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) return unexpected(path + ":" + std::to_string(number) + ": invalid JSON");
    auto rec = EpisodeRecord::from_json(j);
    if (!rec) return unexpected(path + ":" + std::to_string(number) + ": " + rec.error());
    out.push_back(std::move(*rec));
  }
  return out;
}

Expected<ReportBundle, std::string> build_reports(const std::vector<EpisodeRecord>& records,
                                                  const ReportOptions& options) {
  ReportBundle bundle;
  auto overall = metrics::summarize(records);
  if (!overall) return unexpected(overall.error());

  json report{{"overall", overall->to_json()}, {"groups", json::object()}};
  for (const auto& key : options.group_by) {
    auto groups = metrics::group_reports(records, {key});
    if (!groups) return unexpected(groups.error());
    json list = json::array();
    for (const auto& g : *groups) list.push_back(g.to_json());
    report["groups"][key] = std::move(list);

    auto table = metrics::performance_table(records, options.row_key, key);
    if (!table) return unexpected(table.error());
    bundle.files["table_" + key + ".tsv"] = table->tsv;
    for (auto& n : table->notices) bundle.notices.push_back(std::move(n));
  }
  auto errors = metrics::error_table(records, options.row_key);
  if (!errors) return unexpected(errors.error());
  bundle.files["errors.tsv"] = errors->tsv;
  for (auto& n : errors->notices) bundle.notices.push_back(std::move(n));

  report["notices"] = bundle.notices;
  bundle.files["report.json"] = report.dump(2) + "\n";
  bundle.files["breakdown.json"] = metrics::breakdown_json(*overall).dump(2) + "\n";
  return bundle;
}

Expected<std::vector<metrics::SimilarityPair>, std::string> read_similarity_pairs(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) return unexpected("cannot open " + path);
  std::vector<metrics::SimilarityPair> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    try {
      if (j.is_discarded()) throw std::invalid_argument("invalid JSON");
      metrics::SimilarityPair p;
      p.synthetic = j.at("synthetic").get<std::string>();
      p.human = j.at("human").get<std::string>();
      p.n_shapes = j.value("n_shapes", 0);
      p.board_type = j.value("board_type", std::string());
      p.matched = j.value("matched", false);
      out.push_back(std::move(p));
    } catch (const std::exception& e) {
      return unexpected(path + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace gridbench::service
