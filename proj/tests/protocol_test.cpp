#include <doctest.h>

#include <set>

#include "gridbench/datagen/datagen.hpp"
#include "gridbench/lang/parser.hpp"
#include "gridbench/protocol/episode.hpp"

using namespace gridbench;
using namespace gridbench::protocol;
using gridbench::llm::MockChatProvider;

namespace {

std::size_t occurrences(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

const char* kWorkedCode =
    "def wwb(board, colors, x, y):\n"
    "    put(board, 'washer', colors[0], x, y)\n"
    "    put(board, 'washer', colors[1], x, y + 1)\n"
    "    put(board, 'bridge-h', colors[2], x, y)\n"
    "wwb(board, ['green', 'yellow', 'red'], 7, 0)\n";

TaskInstance worked_task() {
  TaskInstance t;
  t.id = "worked";
  t.board_type = BoardType::Simple;
  t.instruction_type = InstructionType::Human;
  t.turns = {"Place a green washer in the bottom left corner, a yellow washer next to it on the "
             "right, and a red horizontal bridge on top of the two washers."};
  t.gold_code = kWorkedCode;
  t.gold_board = *execute_gold(t);
  t.n_shapes = 3;
  return t;
}

std::string worked_answer() {
  return std::string("Function:\n") +
         "def wwb(board, colors, x, y):\n"
         "    put(board, 'washer', colors[0], x, y)\n"
         "    put(board, 'washer', colors[1], x, y + 1)\n"
         "    put(board, 'bridge-h', colors[2], x, y)\n"
         "Usage:\n"
         "wwb(board, ['green', 'yellow', 'red'], 7, 0)\n";
}

std::vector<TaskInstance> regular_pool(int n, std::uint64_t seed) {
  std::vector<TaskInstance> pool;
  for (int i = 0; i < n; ++i) pool.push_back(datagen::gen_regular(seed + i, 2 + i % 4));
  return pool;
}

std::vector<TaskInstance> simple_pool(int n, std::uint64_t seed) {
  std::vector<TaskInstance> pool;
  for (int i = 0; i < n; ++i) pool.push_back(datagen::gen_simple(seed + i, 2 + i % 4));
  return pool;
}

}  // namespace

TEST_CASE("simple-board prompt, zero shots") {
  const auto task = worked_task();
  auto p = build_prompt(task, {PromptVariant::FD, 0}, {});
  REQUIRE(p);
  CHECK(p->rfind("System Info\n", 0) == 0);
  CHECK(p->ends_with("Let's begin\n\nInstruction:\n" + task.turns[0]));
  CHECK(p->find("under the label Function:") != std::string::npos);
  // block order
  const auto sys = p->find("System Info"), env = p->find("Environment Info"),
             info = p->find("Task Info"), ctx = p->find("Context Info"),
             other = p->find("Other Info");
  CHECK(sys < env);
  CHECK(env < info);
  CHECK(info < ctx);
  CHECK(ctx < other);
  CHECK(p->find('$') == std::string::npos);
}

TEST_CASE("regular-board prompt variants") {
  const auto task = datagen::gen_regular(7, 3);
  REQUIRE(task.combo);
  const std::string sig = combo_signature_line(*task.combo);
  const std::string def_text = combo_definition_text(*task.combo);

  auto fsg = build_prompt(task, {PromptVariant::FSG, 0}, {});
  auto fsc = build_prompt(task, {PromptVariant::FSC, 0}, {});
  auto fd = build_prompt(task, {PromptVariant::FD, 0}, {});
  REQUIRE(fsg);
  REQUIRE(fsc);
  REQUIRE(fd);

  CHECK(sig == "- Use `" + task.combo->def.name +
                   "(board: np.ndarray, colors: list[str], x: int, y: int)` to place a '" +
                   task.combo->def.name + "' object on the board");
  CHECK(fsg->find(sig) != std::string::npos);
  CHECK(fsg->find("def " + task.combo->def.name) == std::string::npos);
  CHECK(fsg->find("colors[0]") == std::string::npos);
  CHECK(fsg->find(task.combo->docstring) == std::string::npos);

  // FSC is FSG plus exactly the docstring after the signature line.
  std::string stripped = *fsc;
  const std::string inserted = "\n" + combo_docstring_text(*task.combo);
  const auto at = stripped.find(sig + inserted);
  REQUIRE(at != std::string::npos);
  stripped.erase(at + sig.size(), inserted.size());
  CHECK(stripped == *fsg);

  CHECK(fd->find(sig + "\n" + def_text) != std::string::npos);
  CHECK(fd->find(task.combo->docstring) == std::string::npos);
  CHECK(fd->ends_with("Lets begin\n\nInstruction:\n" + task.turns[0]));
}

TEST_CASE("regular task without combo is rejected") {
  auto task = datagen::gen_regular(3, 2);
  task.combo.reset();
  auto p = build_prompt(task, {PromptVariant::FSG, 0}, {});
  REQUIRE_FALSE(p);
  CHECK(p.error() == PromptError::MissingCombo);
}

TEST_CASE("five shots precede the probe") {
  const auto pool = regular_pool(40, 1000);
  const auto probe = datagen::gen_regular(99, 4);
  auto shots = sample_few_shot(pool, probe, 5, 42);
  REQUIRE(shots);
  REQUIRE(shots->size() == 5);
  auto p = build_prompt(probe, {PromptVariant::FSG, 5}, *shots);
  REQUIRE(p);
  CHECK(occurrences(*p, "Instruction:\n") == 6);
  CHECK(occurrences(*p, "\nOutput:\n") == 5);
  const auto probe_at = p->rfind("Instruction:\n");
  for (const auto& s : *shots) {
    const auto at = p->find("Instruction:\n" + s.turns[0] + "\nOutput:\n");
    CHECK(at != std::string::npos);
    CHECK(at < probe_at);
  }
  CHECK(p->find("Other Info") > p->find("Output:\n"));

  const auto sb_pool = simple_pool(12, 50);
  auto sb_shots = sample_few_shot(sb_pool, worked_task(), 5, 1);
  REQUIRE(sb_shots);
  auto sb = build_prompt(worked_task(), {PromptVariant::FD, 5}, *sb_shots);
  CHECK(occurrences(*sb, "\nFunction:\n") == 5);
  CHECK(occurrences(*sb, "\nUsage:\n") == 5);
}

TEST_CASE("few-shot sampling: type match, probe exclusion, determinism") {
  auto pool = regular_pool(12, 2000);
  for (auto& t : simple_pool(12, 3000)) pool.push_back(t);
  const TaskInstance probe = pool[3];
  auto duplicate_text = pool[5];
  duplicate_text.id = "other-id";
  duplicate_text.turns = probe.turns;
  pool.push_back(duplicate_text);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto s = sample_few_shot(pool, probe, 5, seed);
    REQUIRE(s);
    std::set<std::string> ids;
    for (const auto& t : *s) {
      CHECK(t.board_type == BoardType::Regular);
      CHECK(t.id != probe.id);
      CHECK(instruction_text(t) != instruction_text(probe));
      ids.insert(t.id);
    }
    CHECK(ids.size() == 5);
  }
  auto a = sample_few_shot(pool, probe, 5, 9);
  auto b = sample_few_shot(pool, probe, 5, 9);
  CHECK(*a == *b);

  auto small = regular_pool(5, 10);
  auto fail = sample_few_shot(small, small[0], 5, 0);
  REQUIRE_FALSE(fail);
  CHECK(fail.error() == PromptError::InsufficientPool);
  CHECK(sample_few_shot(small, small[0], 0, 0)->empty());
}

TEST_CASE("response parsing, strict and lenient") {
  auto ok = parse_response(worked_answer(), BoardType::Simple, true);
  REQUIRE(ok);
  CHECK(ok->usage_block == "wwb(board, ['green', 'yellow', 'red'], 7, 0)\n");
  CHECK(lang::parse(ok->code()));

  auto prose = parse_response("Sure! The board has a pattern of washers.", BoardType::Regular, true);
  REQUIRE_FALSE(prose);
  CHECK(prose.error() == AbortReason::MissingLabel);

  auto trailing = parse_response(worked_answer() + "\nThis code places the washers first.",
                                 BoardType::Simple, true);
  REQUIRE_FALSE(trailing);
  CHECK(trailing.error() == AbortReason::ExtraProse);

  auto leading = parse_response("Here you go:\n" + worked_answer(), BoardType::Simple, true);
  REQUIRE_FALSE(leading);
  CHECK(leading.error() == AbortReason::ExtraProse);

  auto empty = parse_response("Output:\n\n", BoardType::Regular, true);
  REQUIRE_FALSE(empty);
  CHECK(empty.error() == AbortReason::EmptyBlock);

  auto no_usage = parse_response("Function:\ndef f(board):\n    put(board, 'nut', 'red', 0, 0)\n",
                                 BoardType::Simple, true);
  REQUIRE_FALSE(no_usage);
  CHECK(no_usage.error() == AbortReason::MissingLabel);

  const std::string fenced = "Output:\n```python\nput(board, 'nut', 'red', 0, 0)\n```\n";
  auto strict_fenced = parse_response(fenced, BoardType::Regular, true);
  REQUIRE_FALSE(strict_fenced);
  CHECK(strict_fenced.error() == AbortReason::ExtraProse);
  auto lenient_fenced = parse_response(fenced, BoardType::Regular, false);
  REQUIRE(lenient_fenced);
  CHECK(lenient_fenced->output_block == "put(board, 'nut', 'red', 0, 0)\n");

  // label with trailing blanks: lenient only
  CHECK_FALSE(parse_response("Output:  \nput(board, 'nut', 'red', 0, 0)", BoardType::Regular, true));
  CHECK(parse_response("Output:  \nput(board, 'nut', 'red', 0, 0)", BoardType::Regular, false));
  CHECK(parse_response("Output:\r\nput(board, 'nut', 'red', 0, 0)\r\n", BoardType::Regular, true));
}

TEST_CASE("episode verdicts") {
  const auto task = worked_task();
  EpisodeOptions opts;

  MockChatProvider gold(MockChatProvider::Script{{"worked", {worked_answer()}}});
  auto rec = run_episode(task, opts, gold);
  CHECK(rec.verdict.kind == Verdict::Kind::Executed);
  CHECK(rec.verdict.matched);
  CHECK(rec.responses == std::vector<std::string>{worked_answer()});
  CHECK(rec.prompt_sha256.size() == 64);

  std::string wrong = worked_answer();
  wrong.replace(wrong.find("'yellow'"), 8, "'blue'");
  MockChatProvider one_off(MockChatProvider::Script{{"worked", {wrong}}});
  auto r2 = run_episode(task, opts, one_off);
  CHECK(r2.verdict.kind == Verdict::Kind::Executed);
  CHECK_FALSE(r2.verdict.matched);
  CHECK(r2.verdict.diff_count == 1);

  auto refuse = MockChatProvider::constant("I cannot help with that.");
  auto r3 = run_episode(task, opts, *refuse);
  CHECK(r3.verdict.kind == Verdict::Kind::Abort);
  CHECK(r3.verdict.reason == AbortReason::MissingLabel);

  MockChatProvider empty_script({});
  auto r4 = run_episode(task, opts, empty_script);
  CHECK(r4.verdict.kind == Verdict::Kind::Abort);
  CHECK(r4.verdict.reason == AbortReason::ProviderFailure);

  std::string off_board = worked_answer();
  off_board.replace(off_board.find("7, 0)\n"), 4, "7, 7");
  MockChatProvider oob(MockChatProvider::Script{{"worked", {off_board}}});
  auto r5 = run_episode(task, opts, oob);
  CHECK(r5.verdict.kind == Verdict::Kind::ExecError);
  CHECK(r5.verdict.category == ErrorCategory::DimensionMismatch);

  MockChatProvider no_def(MockChatProvider::Script{{"worked", {"Function:\nput(board, 'washer', 'green', 7, 0)\nUsage:\n"
                                     "put(board, 'washer', 'yellow', 7, 1)\n"}}});
  auto r6 = run_episode(task, opts, no_def);
  CHECK(r6.verdict.kind == Verdict::Kind::ExecError);
  CHECK(r6.verdict.category == ErrorCategory::UndefinedName);
}

TEST_CASE("episode purity and log round-trip") {
  const auto pool = regular_pool(20, 500);
  const auto task = datagen::gen_regular(77, 3);
  EpisodeOptions opts;
  opts.style = {PromptVariant::FSC, 5};
  opts.seed = 5;
  opts.shot_pool = &pool;
  MockChatProvider mock(MockChatProvider::Script{{task.id, {"Output:\n" + task.gold_code}}});
  auto a = run_episode(task, opts, mock);
  auto b = run_episode(task, opts, mock);
  CHECK(a.verdict.matched);
  a.latency_ms = b.latency_ms = 0;
  CHECK(a.to_json() == b.to_json());
  CHECK(a.prompt == b.prompt);
  CHECK(a.style == "fsc");

  auto back = EpisodeRecord::from_json(a.to_json());
  REQUIRE(back);
  CHECK(back->to_json() == a.to_json());

  auto bad = a.to_json();
  bad["schema"] = "other/2";
  CHECK_FALSE(EpisodeRecord::from_json(bad));
}

TEST_CASE("multi-turn episodes concatenate code and execute once") {
  datagen::GenOptions multi;
  multi.multi_turn = true;
  const auto task = datagen::gen_regular(11, 2, multi);
  REQUIRE(task.turns.size() >= 2);

  // Code may arrive in any turn; only the concatenation is executed.
  std::vector<std::string> late(task.turns.size(), "Output:\nk = 0\n");
  late.back() = "Output:\n" + task.gold_code;
  MockChatProvider mock(MockChatProvider::Script{{task.id, late}});
  auto rec = run_episode(task, {}, mock);
  CHECK(rec.responses.size() == task.turns.size());
  CHECK(mock.calls() == task.turns.size());
  CHECK(rec.verdict.matched);
  CHECK(rec.to_json()["response"].is_array());

  // A format violation in any turn aborts the episode.
  std::vector<std::string> bad = late;
  bad.front() = "Let me think about this.";
  MockChatProvider mock_bad(MockChatProvider::Script{{task.id, bad}});
  auto rec_bad = run_episode(task, {}, mock_bad);
  CHECK(rec_bad.verdict.kind == Verdict::Kind::Abort);
  CHECK(rec_bad.responses.size() == task.turns.size());

  // Follow-up turns travel as user messages in the same conversation.
  struct Recorder : llm::ChatProvider {
    std::vector<std::size_t> sizes;
    std::vector<std::string> last;
    Expected<std::string, llm::ProviderError> complete(std::span<const llm::ChatMessage> m,
                                                       const llm::RequestContext&) override {
      sizes.push_back(m.size());
      last.push_back(m.back().content);
      return std::string("Output:\nk = 0\n");
    }
    std::string model_id() const override { return "rec"; }
  } recorder;
  run_episode(task, {}, recorder);
  REQUIRE(recorder.sizes.size() == task.turns.size());
  CHECK(recorder.sizes[0] == 1);
  CHECK(recorder.sizes[1] == 3);
  CHECK(recorder.last[1] == "Instruction:\n" + task.turns[1]);
}
