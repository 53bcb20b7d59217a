#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "gridbench/datagen/datagen.hpp"
#include "gridbench/llm/provider.hpp"
#include "gridbench/metrics/metrics.hpp"
#include "gridbench/service/reconstruction.hpp"
#include "gridbench/service/run.hpp"

namespace fs = std::filesystem;
using namespace gridbench;
using nlohmann::json;

namespace {

constexpr int kExitError = 1;
constexpr int kExitIncomplete = 3;

int fail(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return kExitError;
}

Expected<json, std::string> read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return unexpected("cannot open " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) return unexpected(path + " is not valid JSON");
  return j;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string out;
  std::uint64_t seed = 0;
  std::string board = "both";
  datagen::SplitCounts simple = datagen::kSimpleSplits;
  datagen::SplitCounts regular = datagen::kRegularSplits;
  int count = 0;
  bool multi_turn = false;
};

int cmd_generate(const GenerateArgs& a) {
  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) return fail("cannot create " + a.out + ": " + ec.message());
  datagen::GenOptions options;
  options.multi_turn = a.multi_turn;
  for (auto type : {protocol::BoardType::Simple, protocol::BoardType::Regular}) {
    if (a.board != "both" && a.board != protocol::to_string(type)) continue;
    datagen::SplitCounts counts = type == protocol::BoardType::Simple ? a.simple : a.regular;
    if (a.count > 0) counts = {0, 0, a.count};
    const auto splits = datagen::generate_splits(type, counts, a.seed, options);
    const std::string prefix = std::string(protocol::to_string(type)) + "_";
    const std::pair<const char*, const std::vector<protocol::TaskInstance>*> parts[] = {
        {"train", &splits.train}, {"validation", &splits.validation}, {"test", &splits.test}};
    for (const auto& [name, tasks] : parts) {
      if (tasks->empty()) continue;
      const std::string path = (fs::path(a.out) / (prefix + name + ".jsonl")).string();
      auto written = datagen::write_dataset(*tasks, path);
      if (!written) return fail(written.error());
      std::cout << path << "\t" << *written << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string manifest;
  std::vector<std::string> datasets;
  std::string model_config;
  std::string mock;
  std::string style = "fd";
  int shots = 0;
  std::string shot_pool;
  bool lenient = false;
  std::uint64_t seed = 0;
  std::string out;
  int parallelism = 0;
};

int cmd_evaluate(const EvaluateArgs& a) {
  service::RunManifest m;
  if (!a.manifest.empty()) {
    auto j = read_json_file(a.manifest);
    if (!j) return fail(j.error());
    auto loaded = service::RunManifest::from_json(*j);
    if (!loaded) return fail(loaded.error());
    m = *loaded;
    if (!a.out.empty()) m.out_dir = a.out;
  } else {
    if (a.datasets.empty()) return fail("--dataset is required");
    if (a.out.empty()) return fail("--out is required");
    if (a.model_config.empty() == a.mock.empty()) {
      return fail("exactly one of --model-config and --mock is required");
    }
    m.datasets = a.datasets;
    if (!a.mock.empty()) {
      m.model_config = {{"mock", a.mock}};
    } else {
      auto j = read_json_file(a.model_config);
      if (!j) return fail(j.error());
      auto cfg = llm::ProviderConfig::from_json(*j);
      if (!cfg) return fail(cfg.error());
      m.model_config = cfg->to_json();
    }
    m.style.variant = *protocol::parse_prompt_variant(a.style);
    m.style.shots = a.shots;
    if (!a.shot_pool.empty()) m.shot_pool = a.shot_pool;
    m.strict = !a.lenient;
    m.seed = a.seed;
    m.out_dir = a.out;
  }

  auto tasks = service::load_tasks(m.datasets);
  if (!tasks) return fail(tasks.error());
  auto provider = service::make_provider(m, *tasks);
  if (!provider) return fail(provider.error());
  int parallelism = a.parallelism;
  if (parallelism <= 0) {
    parallelism = m.model_config.contains("mock") ? 1 : m.model_config.value("parallelism", 4);
  }

  auto result = service::evaluate(m, **provider, parallelism);
  if (!result) return fail(result.error());
  for (const auto& n : result->notices) std::cerr << "notice: " << n << "\n";
  const auto& o = result->overall;
  std::cout << "episodes " << o.episodes << "  success " << metrics::format_fixed(o.success_rate, 2)
            << "  abort " << metrics::format_fixed(o.abort_rate, 2) << "\n"
            << "wrote " << m.out_dir << "\n";
  if (!result->complete) {
    std::cerr << "run incomplete: " << o.provider_failures
              << " episode(s) lost their provider; see " << service::kIncompleteMarker << "\n";
    return kExitIncomplete;
  }
  return 0;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::vector<std::string> logs;
  std::string rows = "model";
  std::vector<std::string> group_by = {"board_type", "instruction_type"};
  std::string out;
  std::string pairs;
  std::string embedder = "hashing";
  std::string similarity_group = "board_type";
};

int cmd_report(const ReportArgs& a) {
  std::vector<protocol::EpisodeRecord> records;
  for (const auto& path : a.logs) {
    auto part = service::read_episode_log(path);
    if (!part) return fail(part.error());
    records.insert(records.end(), part->begin(), part->end());
  }
  service::ReportBundle bundle;
  if (!records.empty()) {
    auto built = service::build_reports(records, {a.rows, a.group_by});
    if (!built) return fail(built.error());
    bundle = std::move(*built);
  } else if (a.pairs.empty()) {
    return fail("logs contain no episodes");
  }

  if (!a.pairs.empty()) {
    auto pairs = service::read_similarity_pairs(a.pairs);
    if (!pairs) return fail(pairs.error());
    std::shared_ptr<llm::EmbeddingProvider> inner;
    if (a.embedder == "hashing") {
      inner = std::make_shared<llm::HashingEmbedder>();
    } else {
      auto j = read_json_file(a.embedder);
      if (!j) return fail(j.error());
      auto cfg = llm::ProviderConfig::from_json(*j);
      if (!cfg) return fail(cfg.error());
      const auto defaults = llm::ProviderConfig::embed_from_env(cfg->model);
      if (!j->contains("base_url")) cfg->base_url = defaults.base_url;
      if (!j->contains("api_key_env")) cfg->api_key_env = defaults.api_key_env;
      inner = std::make_shared<llm::HttpEmbeddingProvider>(*cfg);
    }
    llm::CachedEmbedder embedder(inner);
    const auto grouping = a.similarity_group == "n_shapes" ? metrics::SimilarityGrouping::NShapes
                                                           : metrics::SimilarityGrouping::BoardType;
    const auto report = metrics::similarity_report(*pairs, grouping, embedder);
    const auto table = metrics::similarity_table(report);
    bundle.files["similarity_" + a.similarity_group + ".tsv"] = table.tsv;
    bundle.files["similarity_" + a.similarity_group + ".json"] = report.to_json().dump(2) + "\n";
    bundle.notices.insert(bundle.notices.end(), table.notices.begin(), table.notices.end());
  }

  for (const auto& n : bundle.notices) std::cerr << "notice: " << n << "\n";
  if (a.out.empty()) {
    for (const auto& [name, content] : bundle.files) {
      if (!name.ends_with(".tsv")) continue;
      std::cout << "## " << name << "\n" << content << "\n";
    }
    return 0;
  }
  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) return fail("cannot create " + a.out + ": " + ec.message());
  for (const auto& [name, content] : bundle.files) {
    auto w = service::write_file((fs::path(a.out) / name).string(), content);
    if (!w) return fail(w.error());
    std::cout << *w << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- serve

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<std::string> datasets;
  std::string store = "reconstructions.jsonl";
};

httplib::Server* g_server = nullptr;

int cmd_serve(const ServeArgs& a) {
  std::vector<protocol::TaskInstance> tasks;
  for (const auto& path : a.datasets) {
    auto part = datagen::read_dataset(path);
    if (!part) return fail(path + ": " + part.error().to_string());
    tasks.insert(tasks.end(), part->begin(), part->end());
  }
  auto svc = service::ReconstructionService::open(std::move(tasks), a.store);
  if (!svc) return fail(svc.error());
  httplib::Server server;
  service::mount_routes(server, **svc);
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  std::cout << "serving " << a.host << ":" << a.port << " (" << (*svc)->stored()
            << " stored reconstructions)" << std::endl;
  if (!server.listen(a.host, a.port)) return fail("cannot listen on port " + std::to_string(a.port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Execution-based evaluation harness for grid building instructions"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate synthetic train/validation/test splits");
  g->add_option("--out", gen.out, "Output directory")->required();
  g->add_option("--seed", gen.seed, "Generator seed");
  g->add_option("--board", gen.board, "Board types to generate")
      ->check(CLI::IsMember({"simple", "regular", "both"}));
  g->add_option("--sb-train", gen.simple.train);
  g->add_option("--sb-validation", gen.simple.validation);
  g->add_option("--sb-test", gen.simple.test);
  g->add_option("--rb-train", gen.regular.train);
  g->add_option("--rb-validation", gen.regular.validation);
  g->add_option("--rb-test", gen.regular.test);
  g->add_option("--count", gen.count, "Write only a test split of N tasks per board type")
      ->check(CLI::PositiveNumber);
  g->add_flag("--multi-turn", gen.multi_turn, "Split instructions into one turn per sentence");

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Run episodes against a model or mock provider");
  e->add_option("--manifest", ev.manifest, "Replay a run manifest");
  e->add_option("--dataset", ev.datasets, "Dataset JSONL (repeatable)");
  e->add_option("--model-config", ev.model_config, "Provider config JSON");
  e->add_option("--mock", ev.mock, "Mock script file, @gold or @prose");
  e->add_option("--style", ev.style, "Regular-board prompt variant")
      ->check(CLI::IsMember({"fd", "fsg", "fsc"}));
  e->add_option("--shots", ev.shots, "In-context examples")->check(CLI::IsMember({0, 5}));
  e->add_option("--shot-pool", ev.shot_pool, "Dataset to draw shots from");
  e->add_flag("--lenient{true},--strict{false}", ev.lenient, "Response parsing mode");
  e->add_option("--seed", ev.seed, "Shot sampling seed");
  e->add_option("--out", ev.out, "Run directory");
  e->add_option("--parallelism", ev.parallelism, "Concurrent episodes");

  ReportArgs rp;
  auto* r = app.add_subcommand("report", "Render tables from episode logs");
  r->add_option("logs", rp.logs, "episodes.jsonl files");
  r->add_option("--rows", rp.rows, "Row key of the tables");
  r->add_option("--group-by", rp.group_by, "Column keys")->delimiter(',');
  r->add_option("--out", rp.out, "Directory for report files (stdout when omitted)");
  r->add_option("--pairs", rp.pairs, "Synthetic/human instruction pairs JSONL");
  r->add_option("--embedder", rp.embedder, "hashing or an embedding provider config JSON");
  r->add_option("--similarity-group", rp.similarity_group)
      ->check(CLI::IsMember({"board_type", "n_shapes"}));

  ServeArgs sv;
  auto* s = app.add_subcommand("serve", "Human reconstruction backend");
  s->add_option("--host", sv.host);
  s->add_option("--port", sv.port)->check(CLI::Range(1, 65535));
  s->add_option("--dataset", sv.datasets, "Dataset JSONL (repeatable)")->required();
  s->add_option("--store", sv.store, "Append-only submission store");

  CLI11_PARSE(app, argc, argv);
  if (g->parsed()) return cmd_generate(gen);
  if (e->parsed()) return cmd_evaluate(ev);
  if (r->parsed()) return cmd_report(rp);
  return cmd_serve(sv);
}
