#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridbench/expected.hpp"
#include "gridbench/protocol/task.hpp"

namespace gridbench::protocol {

/// How much of the combo a regular-board prompt exposes.
enum class PromptVariant { FD, FSG, FSC };

std::string_view to_string(PromptVariant v) noexcept;
std::optional<PromptVariant> parse_prompt_variant(std::string_view s) noexcept;

struct PromptStyle {
  PromptVariant variant = PromptVariant::FD;
  int shots = 0;
};

enum class PromptError { MissingCombo, InsufficientPool };

std::string_view to_string(PromptError e) noexcept;

/// Line announcing the combo, e.g. "- Use `sq(board: np.ndarray, ...)` to place ...".
std::string combo_signature_line(const ComboDef& combo);
/// Text inserted after the signature line by the FSC variant.
std::string combo_docstring_text(const ComboDef& combo);
/// Text inserted after the signature line by the FD variant.
std::string combo_definition_text(const ComboDef& combo);

/// The reference answer for a task in response format ("Function:/Usage:" or "Output:").
Expected<std::string, std::string> reference_answer(const TaskInstance& task);

/// Renders the filled template. `shots` are placed under Context Info in order.
Expected<std::string, PromptError> build_prompt(const TaskInstance& task, const PromptStyle& style,
                                                const std::vector<TaskInstance>& shots);

/// Follow-up message for turn > 0 of a multi-turn task.
std::string follow_up_message(const std::string& turn_text);

/// k pool items of the probe's board type, none sharing its id or instruction
/// text, in seeded sample order.
Expected<std::vector<TaskInstance>, PromptError> sample_few_shot(
    const std::vector<TaskInstance>& pool, const TaskInstance& probe, int k, std::uint64_t seed);

}  // namespace gridbench::protocol
