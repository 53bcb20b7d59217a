#include "gridbench/protocol/prompt.hpp"

#include <cctype>
#include <map>
#include <numeric>

#include "gridbench/lang/parser.hpp"
#include "gridbench/util.hpp"
#include "templates.hpp"

namespace gridbench::protocol {
namespace {

/// Single pass over `tmpl`; inserted values are never rescanned.
std::string fill(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '$') {
      std::size_t j = i + 1;
      while (j < tmpl.size() && (std::isupper(static_cast<unsigned char>(tmpl[j])) ||
                                 tmpl[j] == '_')) {
        ++j;
      }
      if (auto it = values.find(std::string(tmpl.substr(i + 1, j - i - 1))); it != values.end()) {
        out += it->second;
        i = j;
        continue;
      }
    }
    out += tmpl[i++];
  }
  return out;
}

std::string chomp(std::string s) {
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

std::string render_shot(const TaskInstance& shot) {
  auto answer = reference_answer(shot);
  return "Instruction:\n" + instruction_text(shot) + "\n" +
         (answer ? *answer : std::string("Output:\n") + chomp(shot.gold_code));
}

}  // namespace

std::string_view to_string(PromptVariant v) noexcept {
  switch (v) {
    case PromptVariant::FD: return "fd";
    case PromptVariant::FSG: return "fsg";
    case PromptVariant::FSC: return "fsc";
  }
  return "?";
}

std::optional<PromptVariant> parse_prompt_variant(std::string_view s) noexcept {
  const std::string lower = to_lower(s);
  if (lower == "fd") return PromptVariant::FD;
  if (lower == "fsg") return PromptVariant::FSG;
  if (lower == "fsc") return PromptVariant::FSC;
  return std::nullopt;
}

std::string_view to_string(PromptError e) noexcept {
  return e == PromptError::MissingCombo ? "MissingCombo" : "InsufficientPool";
}

std::string combo_signature_line(const ComboDef& combo) {
  return fill(templates::kComboLine, {{"COMBO_NAME", combo.def.name}, {"COLORS", "list[str]"}});
}

std::string combo_docstring_text(const ComboDef& combo) {
  return "\"\"\"" + combo.docstring + "\"\"\"";
}

std::string combo_definition_text(const ComboDef& combo) {
  return chomp(lang::pretty_print(combo.def));
}

Expected<std::string, std::string> reference_answer(const TaskInstance& task) {
  auto program = lang::parse(task.gold_code);
  if (!program) return unexpected(program.error().to_string());
  if (task.board_type == BoardType::Regular) {
    return "Output:\n" + chomp(lang::pretty_print(*program));
  }
  const auto parts = split_solution(*program);
  return "Function:\n" + parts.function_block + "Usage:\n" + chomp(parts.usage_block);
}

Expected<std::string, PromptError> build_prompt(const TaskInstance& task, const PromptStyle& style,
                                                const std::vector<TaskInstance>& shots) {
  std::string samples;
  for (const auto& s : shots) {
    if (!samples.empty()) samples += "\n\n";
    samples += render_shot(s);
  }
  const std::string first_turn = task.turns.empty() ? std::string() : task.turns.front();

  if (task.board_type == BoardType::Simple) {
    return fill(templates::kSimple,
                {{"INCONTEXT_SAMPLES", samples}, {"TEST_INSTRUCTION", first_turn}});
  }
  if (!task.combo) return unexpected(PromptError::MissingCombo);
  std::string combo_line = combo_signature_line(*task.combo);
  switch (style.variant) {
    case PromptVariant::FSG: break;
    case PromptVariant::FSC: combo_line += "\n" + combo_docstring_text(*task.combo); break;
    case PromptVariant::FD: combo_line += "\n" + combo_definition_text(*task.combo); break;
  }
  return fill(templates::kRegular, {{"COMBO_LINE", combo_line},
                                    {"INCONTEXT_SAMPLES", samples},
                                    {"TEST_INSTRUCTION", first_turn}});
}

std::string follow_up_message(const std::string& turn_text) {
  return "Instruction:\n" + turn_text;
}

Expected<std::vector<TaskInstance>, PromptError> sample_few_shot(
    const std::vector<TaskInstance>& pool, const TaskInstance& probe, int k, std::uint64_t seed) {
  if (k <= 0) return std::vector<TaskInstance>{};
  const std::string probe_text = instruction_text(probe);
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto& t = pool[i];
    if (t.board_type == probe.board_type && t.id != probe.id &&
        instruction_text(t) != probe_text) {
      eligible.push_back(i);
    }
  }
  if (eligible.size() < static_cast<std::size_t>(k)) return unexpected(PromptError::InsufficientPool);
  Rng rng(seed);
  std::vector<TaskInstance> out;
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    const auto j = i + rng.below(eligible.size() - i);
    std::swap(eligible[i], eligible[j]);
    out.push_back(pool[eligible[i]]);
  }
  return out;
}

}  // namespace gridbench::protocol
