// One PASS/FAIL line per primary acceptance criterion. Exit status is nonzero
// when any line fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "gridbench/adapters/adapters.hpp"
#include "gridbench/board_document.hpp"
#include "gridbench/datagen/datagen.hpp"
#include "gridbench/lang/interpreter.hpp"
#include "gridbench/lang/parser.hpp"
#include "gridbench/metrics/metrics.hpp"
#include "gridbench/metrics/simd.hpp"
#include "gridbench/protocol/episode.hpp"
#include "support/program_gen.hpp"
#include "support/rule_oracle.hpp"
#include "support/unroller.hpp"

using namespace gridbench;
using protocol::AbortReason;
using protocol::BoardType;
using protocol::EpisodeRecord;
using protocol::TaskInstance;
using protocol::Verdict;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances.
constexpr double kUnitTolerance = 1e-9;        // bleu(s,s), cosine(v,v)
constexpr double kKernelRelTolerance = 1e-12;  // SIMD vs scalar sums
constexpr double kCorpusMedianTolerance = 0.02;
constexpr double kPercentSumTolerance = 0.1;
constexpr auto kPlacementLimit = std::chrono::seconds(1);
constexpr auto kUnrollLimit = std::chrono::seconds(10);
constexpr auto kDatagenLimit = std::chrono::seconds(60);
constexpr auto kSuiteLimit = std::chrono::seconds(120);

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Accumulates sub-checks; the first failure names itself in the detail.
struct Checks {
  bool ok = true;
  std::string first_failure;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      first_failure = what;
    }
  }
  Outcome done(std::string summary) const {
    if (ok) return {true, std::move(summary)};
    return {false, first_failure};
  }
};

std::string seconds(Clock::duration d) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << std::chrono::duration<double>(d).count() << " s";
  return s.str();
}

lang::Program must_parse(const std::string& src) {
  auto p = lang::parse(src);
  if (!p) throw std::runtime_error("fixture does not parse: " + p.error().to_string());
  return *p;
}

// ---------------------------------------------------------------- criteria

Outcome placement_oracle() {
  const auto t0 = Clock::now();
  int agree = 0, total = 0;
  std::string first_disagreement;
  const oracle::Model empty{};
  for (ShapeKind s : kAllShapes) {
    for (const auto& color : Rules::defaults().colors) {
      for (int x = 0; x < kBoardSize; ++x) {
        for (int y = 0; y < kBoardSize; ++y) {
          ++total;
          const std::string expected = oracle::predict(empty, std::string(to_string(s)), x, y);
          auto r = place(new_board(), s, Color(color), {x, y});
          const std::string got = r ? "ok" : std::string(to_string(r.error().category));
          if (got == expected) {
            ++agree;
          } else if (first_disagreement.empty()) {
            first_disagreement = std::string(to_string(s)) + " at (" + std::to_string(x) + "," +
                                 std::to_string(y) + "): " + got + " vs oracle " + expected;
          }
        }
      }
    }
  }
  const auto elapsed = Clock::now() - t0;
  Checks c;
  c.expect(total == 1920, "expected 1920 cases, ran " + std::to_string(total));
  c.expect(agree == total, first_disagreement);
  c.expect(elapsed < kPlacementLimit, "took " + seconds(elapsed));
  return c.done(std::to_string(agree) + "/" + std::to_string(total) + " agree in " + seconds(elapsed));
}

/// Element-level diffs: a bridge counts once, at its anchor cell.
std::size_t element_diffs(const Board& gold, const Board& actual) {
  std::size_t n = 0;
  for (const auto& d : diff_boards(gold, actual)) {
    const std::size_t i = static_cast<std::size_t>(d.level - 1);
    const Piece* g = i < d.expected.size() ? &d.expected[i] : nullptr;
    const Piece* a = i < d.actual.size() ? &d.actual[i] : nullptr;
    const bool partner_only = (!g || !g->anchor) && (!a || !a->anchor);
    if (!partner_only) ++n;
  }
  return n;
}

Outcome worked_fixture() {
  const std::string gold_code =
      "def wwb(board, colors, x, y):\n"
      "    put(board, 'washer', colors[0], x, y)\n"
      "    put(board, 'washer', colors[1], x, y + 1)\n"
      "    put(board, 'bridge-h', colors[2], x, y)\n"
      "wwb(board, ['green', 'yellow', 'red'], 7, 0)\n";
  auto gold = lang::execute(must_parse(gold_code));
  Checks c;
  c.expect(gold.has_value(), "gold program failed to execute");
  if (!gold) return c.done("");
  c.expect(gold->component_count() == 3, "gold board should hold 3 components");
  c.expect(gold->depth({7, 0}) == 2 && gold->depth({7, 1}) == 2, "bridge should sit at level 2");
  c.expect(protocol::score_code(gold_code, lang::ValidationMode::SimpleBoard, {}, *gold).matched,
           "gold program does not self-match");

  struct Mutation {
    const char* name;
    std::string script;
    std::optional<ErrorCategory> error;  // otherwise exactly one element diff
  };
  auto script = [](std::string w1, std::string w2, std::string br) {
    return w1 + "\n" + w2 + "\n" + br + "\n";
  };
  const std::string w1 = "put(board, 'washer', 'green', 7, 0)";
  const std::string w2 = "put(board, 'washer', 'yellow', 7, 1)";
  const std::string br = "put(board, 'bridge-h', 'red', 7, 0)";
  const std::vector<Mutation> mutations{
      {"color flip: first washer", script("put(board, 'washer', 'blue', 7, 0)", w2, br), {}},
      {"color flip: second washer", script(w1, "put(board, 'washer', 'green', 7, 1)", br), {}},
      {"color flip: bridge", script(w1, w2, "put(board, 'bridge-h', 'orange', 7, 0)"), {}},
      {"shape swap: first washer -> screw", script("put(board, 'screw', 'green', 7, 0)", w2, br), {}},
      {"shape swap: second washer -> nut", script(w1, "put(board, 'nut', 'yellow', 7, 1)", br), {}},
      {"shape swap: bridge-h -> washer", script(w1, w2, "put(board, 'washer', 'red', 7, 0)"),
       ErrorCategory::SameShapeStacking},
      {"shape swap: bridge-h -> bridge-v", script(w1, w2, "put(board, 'bridge-v', 'red', 7, 0)"),
       ErrorCategory::DimensionMismatch},
      {"shift: first washer up a row", script("put(board, 'washer', 'green', 6, 0)", w2, br),
       ErrorCategory::DepthMismatch},
      {"shift: second washer right", script(w1, "put(board, 'washer', 'yellow', 7, 2)", br),
       ErrorCategory::DepthMismatch},
      {"shift: bridge right", script(w1, w2, "put(board, 'bridge-h', 'red', 7, 1)"),
       ErrorCategory::DepthMismatch},
      {"shift: second washer off the board", script(w1, "put(board, 'washer', 'yellow', 8, 1)", br),
       ErrorCategory::DimensionMismatch},
  };
  for (const auto& m : mutations) {
    const Verdict v = protocol::score_code(m.script, lang::ValidationMode::Script, {}, *gold);
    if (m.error) {
      c.expect(v.kind == Verdict::Kind::ExecError && v.category == *m.error,
               std::string(m.name) + ": expected " + std::string(to_string(*m.error)));
    } else {
      auto board = lang::execute(must_parse(m.script));
      c.expect(v.kind == Verdict::Kind::Executed && !v.matched && board &&
                   element_diffs(*gold, *board) == 1,
               std::string(m.name) + ": expected exactly one element mismatch");
      auto cat = metrics::categorize(v);
      c.expect(cat && cat->error_class == metrics::ErrorClass::ElementMismatch,
               std::string(m.name) + ": not categorized as ElementMismatch");
    }
  }
  return c.done("gold self-matches; " + std::to_string(mutations.size()) +
                " mutations give one element diff or the expected error");
}

Outcome error_taxonomy() {
  const std::vector<std::pair<ErrorCategory, std::string>> cases{
      {ErrorCategory::DepthMismatch, "put(board, 'bridge-h', 'red', 0, 0)\n"},
      {ErrorCategory::BridgePlacement,
       "for y in range(2):\n"
       "    put(board, 'washer', 'red', 0, y)\n"
       "    put(board, 'screw', 'red', 0, y)\n"
       "    put(board, 'washer', 'red', 0, y)\n"
       "put(board, 'bridge-h', 'blue', 0, 0)\n"},
      {ErrorCategory::DimensionMismatch, "put(board, 'washer', 'red', 8, 0)\n"},
      {ErrorCategory::ValueError, "put(board, 'washer', 'red', 'a', 0)\n"},
      {ErrorCategory::UnknownKey, "put(board, 'spring', 'red', 0, 0)\n"},
      {ErrorCategory::UndefinedName, "put(board, 'washer', 'red', x, 0)\n"},
      {ErrorCategory::NotOnTopOfScrew,
       "put(board, 'washer', 'red', 0, 0)\nput(board, 'nut', 'red', 0, 0)\n"},
      {ErrorCategory::SameShapeStacking,
       "put(board, 'washer', 'red', 0, 0)\nput(board, 'washer', 'blue', 0, 0)\n"},
      {ErrorCategory::BudgetExceeded, "for i in range(10**9):\n    k = i\n"},
  };
  Checks c;
  for (const auto& [category, src] : cases) {
    auto r = lang::execute(must_parse(src));
    const std::string got = r ? "no error" : std::string(to_string(r.error().category));
    c.expect(!r && r.error().category == category,
             std::string(to_string(category)) + " program produced " + got);
    const Verdict v = protocol::score_code(src, lang::ValidationMode::Script, {}, new_board());
    c.expect(v.kind == Verdict::Kind::ExecError && v.category == category,
             std::string(to_string(category)) + " verdict differs from the interpreter");
  }
  return c.done(std::to_string(cases.size()) + "/" + std::to_string(cases.size()) +
                " categories reproduced exactly");
}

Outcome loop_unrolling() {
  testgen::ProgramGen g(424242);
  lang::ComboTable combos;
  combos.emplace("sq", std::get<lang::FunctionDef>(must_parse(testgen::kSquare).items.at(0).node));
  const auto t0 = Clock::now();
  int identical = 0, both_failed = 0;
  Checks c;
  for (int i = 0; i < 500; ++i) {
    // Mostly valid grids, plus unconstrained programs that exercise errors.
    const lang::Program p =
        i % 5 == 4 ? testgen::random_regular_program(g) : testgen::random_grid_program(g);
    auto looped = lang::execute(p, combos);
    auto flat = lang::execute(unroll::unrolled(p), combos);
    if (looped && flat && board_equal(*looped, *flat)) {
      ++identical;
    } else if (!looped && !flat && looped.error().category == flat.error().category) {
      ++both_failed;
    } else {
      c.expect(false, "program " + std::to_string(i) + " diverges:\n" + lang::pretty_print(p));
    }
  }
  const auto elapsed = Clock::now() - t0;
  c.expect(elapsed < kUnrollLimit, "took " + seconds(elapsed));
  c.expect(identical >= 400, "only " + std::to_string(identical) + " programs built a board");
  return c.done("500/500 equivalent (" + std::to_string(identical) + " identical boards, " +
                std::to_string(both_failed) + " identical errors) in " + seconds(elapsed));
}

Outcome datagen_consistency() {
  const auto t0 = Clock::now();
  Checks c;
  std::size_t total = 0;
  for (auto [type, counts] : {std::pair{BoardType::Simple, datagen::kSimpleSplits},
                              std::pair{BoardType::Regular, datagen::kRegularSplits}}) {
    const auto splits = datagen::generate_splits(type, counts, 0);
    c.expect(static_cast<int>(splits.train.size()) == counts.train &&
                 static_cast<int>(splits.validation.size()) == counts.validation &&
                 static_cast<int>(splits.test.size()) == counts.test,
             std::string(to_string(type)) + " split sizes differ from the table");
    std::set<std::string> ids, texts;
    for (const auto* part : {&splits.train, &splits.validation, &splits.test}) {
      for (const auto& t : *part) {
        ++total;
        auto board = protocol::execute_gold(t);
        c.expect(board && board_equal(*board, t.gold_board), t.id + " is not self-consistent");
        c.expect(ids.insert(t.id).second, "duplicate id " + t.id);
        c.expect(texts.insert(protocol::instruction_text(t)).second,
                 "instruction shared across splits: " + t.id);
      }
    }
  }
  const auto elapsed = Clock::now() - t0;
  c.expect(total == 1332 + 1428, "generated " + std::to_string(total) + " tasks");
  c.expect(elapsed < kDatagenLimit, "took " + seconds(elapsed));
  return c.done(std::to_string(total) + " tasks self-consistent, splits disjoint, " +
                seconds(elapsed));
}

Outcome metric_arithmetic() {
  Checks c;
  const auto tasks = datagen::generate_splits(BoardType::Simple, {0, 0, 130}, 77).test;
  llm::MockChatProvider::Script script;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (i < 13) {
      script[tasks[i].id] = {*protocol::reference_answer(tasks[i])};
    } else if (i < 20) {
      script[tasks[i].id] = {"Here is how I would build it: first a washer, then a nut."};
    } else {
      script[tasks[i].id] = {*protocol::reference_answer(tasks[(i + 1) % tasks.size()])};
    }
  }
  llm::MockChatProvider mock(script);
  std::vector<EpisodeRecord> recs;
  for (const auto& t : tasks) recs.push_back(protocol::run_episode(t, {}, mock));
  auto report = metrics::summarize(recs);
  c.expect(report.has_value(), "summary failed");
  if (!report) return c.done("");
  const std::string sr = metrics::format_fixed(report->success_rate, 2);
  const std::string ar = metrics::format_fixed(report->abort_rate, 2);
  c.expect(report->matches == 13 && sr == "0.10", "success rate " + sr);
  c.expect(report->aborts == 7 && ar == "0.05", "abort rate " + ar);

  const auto pie = metrics::breakdown({{"DimensionMismatch", 14}, {"DepthMismatch", 7}, {"ValueError", 6}});
  const std::string split = metrics::format_fixed(pie.at("DimensionMismatch"), 1) + "/" +
                            metrics::format_fixed(pie.at("DepthMismatch"), 1) + "/" +
                            metrics::format_fixed(pie.at("ValueError"), 1);
  c.expect(split == "51.9/25.9/22.2", "breakdown " + split);
  double sum = 0;
  for (const auto& [k, v] : pie) sum += v;
  c.expect(std::abs(sum - 100.0) <= kPercentSumTolerance, "breakdown sums to " + std::to_string(sum));

  std::vector<Verdict> human(127, Verdict::executed(0));
  human.insert(human.end(), 3, Verdict::executed(2));
  const std::string hb = metrics::format_fixed(*metrics::success_rate(human), 2);
  c.expect(hb == "0.98", "human baseline " + hb);
  return c.done("success " + sr + ", abort " + ar + ", breakdown " + split + "%, 127/130 -> " + hb);
}

Outcome prompt_protocol() {
  Checks c;
  const auto regular = datagen::generate_splits(BoardType::Regular, {60, 0, 10}, 3);
  const auto simple = datagen::generate_splits(BoardType::Simple, {60, 0, 0}, 3);
  std::vector<TaskInstance> pool = regular.train;
  pool.insert(pool.end(), simple.train.begin(), simple.train.end());

  for (const auto& task : regular.test) {
    const auto& combo = *task.combo;
    const std::string signature = protocol::combo_signature_line(combo);
    const std::string body = protocol::combo_definition_text(combo);
    const std::string doc = protocol::combo_docstring_text(combo);
    auto fsg = protocol::build_prompt(task, {protocol::PromptVariant::FSG, 0}, {});
    auto fsc = protocol::build_prompt(task, {protocol::PromptVariant::FSC, 0}, {});
    auto fd = protocol::build_prompt(task, {protocol::PromptVariant::FD, 0}, {});
    c.expect(fsg && fsc && fd, task.id + ": prompt failed");
    if (!fsg || !fsc || !fd) continue;
    c.expect(fsg->find(signature) != std::string::npos, task.id + ": FSG lacks the signature");
    c.expect(fsg->find(body) == std::string::npos, task.id + ": FSG shows the body");
    c.expect(fd->find(body) != std::string::npos, task.id + ": FD lacks the definition");
    std::string stripped = *fsc;
    const auto at = stripped.find("\n" + doc);
    c.expect(at != std::string::npos, task.id + ": FSC lacks the docstring");
    if (at != std::string::npos) stripped.erase(at, doc.size() + 1);
    c.expect(stripped == *fsg, task.id + ": FSC differs from FSG by more than the docstring");
  }

  std::size_t probes = 0;
  for (const auto* probe_set : {&regular.test, &simple.train}) {
    for (const auto& probe : *probe_set) {
      ++probes;
      auto shots = protocol::sample_few_shot(pool, probe, 5, probes);
      c.expect(shots && shots->size() == 5, probe.id + ": did not get 5 shots");
      if (!shots) continue;
      for (const auto& s : *shots) {
        c.expect(s.board_type == probe.board_type, probe.id + ": shot of another board type");
        c.expect(s.id != probe.id, probe.id + ": probe sampled as its own shot");
      }
    }
  }
  return c.done(std::to_string(regular.test.size()) + " RB tasks: FSG/FSC/FD exact; " +
                std::to_string(probes) + " probes drew 5 same-type shots");
}

Outcome similarity() {
  Checks c;
  const std::vector<std::string> sentences{
      "place a red washer in the bottom left corner",
      "build a tower of three screws",
      "put a horizontal bridge across the two washers on the right"};
  for (const auto& s : sentences) {
    c.expect(std::abs(metrics::sentence_bleu(s, s) - 1.0) <= kUnitTolerance, "bleu(s,s) != 1");
  }
  std::mt19937_64 gen(5);
  std::normal_distribution<double> dist;
  for (std::size_t n : {1u, 3u, 8u, 384u, 1024u}) {
    std::vector<double> v(n), w(n);
    for (auto& x : v) x = dist(gen);
    for (auto& x : w) x = dist(gen);
    c.expect(std::abs(*metrics::cosine_similarity(v, v) - 1.0) <= kUnitTolerance, "cosine(v,v) != 1");
    const auto ref = metrics::simd::scalar_kernel().sums(v.data(), w.data(), n);
    for (const auto& k : metrics::simd::available_kernels()) {
      const auto got = k.sums(v.data(), w.data(), n);
      const double scale = std::abs(ref.uu) + std::abs(ref.vv) + 1.0;
      c.expect(std::abs(got.uv - ref.uv) <= kKernelRelTolerance * scale,
               std::string(k.name) + " kernel disagrees with scalar");
    }
  }

  // Synthetic fixtures: a synthetic instruction against a lightly edited copy.
  std::vector<metrics::SimilarityPair> pairs;
  for (auto type : {BoardType::Simple, BoardType::Regular}) {
    for (const auto& t : datagen::generate_splits(type, {0, 0, 8}, 9).test) {
      std::string text = protocol::instruction_text(t);
      pairs.push_back({text, "please " + text, t.n_shapes, std::string(to_string(type)), true});
    }
  }
  llm::HashingEmbedder embedder;
  const auto by_type = metrics::similarity_report(pairs, metrics::SimilarityGrouping::BoardType, embedder);
  const auto by_shapes = metrics::similarity_report(pairs, metrics::SimilarityGrouping::NShapes, embedder);
  const auto t5 = metrics::similarity_table(by_type);
  const auto t7 = metrics::similarity_table(by_shapes);
  c.expect(by_type.groups.size() == 2 && !by_type.incomplete, "board-type similarity layout: expected SB and RB groups");
  c.expect(by_shapes.groups.size() == 4, "shape-count similarity layout: expected groups for 2..5 shapes");
  c.expect(t5.tsv.rfind("board_type\t", 0) == 0 && t7.tsv.rfind("n_shapes\t", 0) == 0,
           "similarity table headers");
  std::string summary = "unit identities hold; similarity layouts render";

  const char* corpus = std::getenv("GRIDBENCH_SIMILARITY_PAIRS");
  const char* embed_cfg = std::getenv("GRIDBENCH_EMBED_CONFIG");
  if (!corpus || !embed_cfg) {
    summary += "; original-corpus medians skipped (GRIDBENCH_SIMILARITY_PAIRS and "
               "GRIDBENCH_EMBED_CONFIG not set)";
    return c.done(summary);
  }
  // Optional check against the original corpus.
  std::ifstream in(corpus);
  std::vector<metrics::SimilarityPair> original;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    original.push_back({j.at("synthetic"), j.at("human"), j.value("n_shapes", 0),
                        j.at("board_type"), j.value("matched", false)});
  }
  std::ifstream cfg_in(embed_cfg);
  auto cfg = llm::ProviderConfig::from_json(nlohmann::json::parse(cfg_in));
  c.expect(cfg.has_value(), "embedding config invalid");
  if (!cfg) return c.done(summary);
  llm::CachedEmbedder remote(std::make_shared<llm::HttpEmbeddingProvider>(*cfg));
  const auto rep = metrics::similarity_report(original, metrics::SimilarityGrouping::BoardType, remote);
  const std::map<std::string, std::pair<double, double>> expected{{"simple", {0.356, 0.979}},
                                                                  {"regular", {0.024, 0.623}}};
  for (const auto& g : rep.groups) {
    auto it = expected.find(g.group);
    if (it == expected.end()) continue;
    c.expect(std::abs(g.bleu.median - it->second.first) <= kCorpusMedianTolerance,
             g.group + " BLEU median " + std::to_string(g.bleu.median));
    c.expect(g.cosine && std::abs(g.cosine->median - it->second.second) <= kCorpusMedianTolerance,
             g.group + " cosine median missing or off");
  }
  return c.done(summary + "; original-corpus medians within 0.02");
}

Outcome adapters_self_match() {
  Checks c;
  std::string summary;
  const std::string fixtures = GRIDBENCH_FIXTURE_DIR;
  const std::vector<std::tuple<const char*, std::string, const char*>> sources{
      {"hexagons", fixtures + "/hexagons.jsonl", "GRIDBENCH_HEXAGONS"},
      {"tidybot", fixtures + "/tidybot.jsonl", "GRIDBENCH_TIDYBOT"}};
  for (const auto& [name, bundled, env] : sources) {
    std::vector<std::string> paths{bundled};
    if (const char* full = std::getenv(env)) paths.push_back(full);
    for (const auto& path : paths) {
      auto tasks = adapters::read_adapter_dataset(path);
      c.expect(tasks.has_value(), path + ": " + (tasks ? "" : tasks.error().to_string()));
      if (!tasks) continue;
      std::size_t matched = 0;
      for (const auto& t : *tasks) {
        const Verdict v = adapters::score_adapter(t, t.gold_code);
        if (v.matched) {
          ++matched;
        } else {
          c.expect(false, t.id + " does not self-match: " + v.detail);
        }
      }
      if (path == bundled) c.expect(tasks->size() >= 5, std::string(name) + ": fewer than 5 fixtures");
      summary += (summary.empty() ? "" : ", ") + std::string(name) + " " + std::to_string(matched) +
                 "/" + std::to_string(tasks->size()) + (path == bundled ? " (bundled)" : " (full)");
    }
  }
  summary += " self-match";
  if (!std::getenv("GRIDBENCH_HEXAGONS") && !std::getenv("GRIDBENCH_TIDYBOT")) {
    summary += "; full corpora skipped (GRIDBENCH_HEXAGONS and GRIDBENCH_TIDYBOT not set)";
  }
  return c.done(summary);
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::size_t network_before = llm::network_requests();

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"placement-rule oracle", placement_oracle},
      {"worked-example fixture and mutations", worked_fixture},
      {"error taxonomy", error_taxonomy},
      {"loop-unrolling equivalence", loop_unrolling},
      {"datagen self-consistency", datagen_consistency},
      {"metric arithmetic", metric_arithmetic},
      {"prompt variants and few-shot sampling", prompt_protocol},
      {"similarity", similarity},
      {"adapters self-match", adapters_self_match},
  };
  int failed = 0;
  int index = 0;
  auto print = [&](const std::string& name, const Outcome& o) {
    ++index;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << std::setw(2) << index << "] " << name
              << ": " << o.detail << std::endl;
    if (!o.pass) ++failed;
  };
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    print(name, o);
  }

  const auto elapsed = Clock::now() - t0;
  const std::size_t requests = llm::network_requests() - network_before;
  Checks offline;
  offline.expect(requests == 0, std::to_string(requests) + " network request(s) were made");
  offline.expect(elapsed < kSuiteLimit, "suite took " + seconds(elapsed));
  print("offline guarantee",
        offline.done("0 network requests, mock providers only, suite ran in " + seconds(elapsed)));

  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
