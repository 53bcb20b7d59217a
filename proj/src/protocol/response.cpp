#include "gridbench/protocol/response.hpp"

#include "gridbench/lang/parser.hpp"
#include "gridbench/util.hpp"

namespace gridbench::protocol {
namespace {

std::string rstrip(std::string_view s) {
  std::size_t n = s.size();
  while (n > 0 && std::isspace(static_cast<unsigned char>(s[n - 1]))) --n;
  return std::string(s.substr(0, n));
}

bool blank(std::string_view s) { return trim(s).empty(); }

bool is_fence(std::string_view line) { return trim(line).rfind("```", 0) == 0; }

struct Lines {
  std::vector<std::string> items;
  bool strict;

  std::optional<std::size_t> find_label(std::string_view label, std::size_t from = 0) const {
    for (std::size_t i = from; i < items.size(); ++i) {
      const std::string& l = items[i];
      if (strict ? l == label : trim(l) == label) return i;
    }
    return std::nullopt;
  }

  bool any_text(std::size_t begin, std::size_t end) const {
    for (std::size_t i = begin; i < end; ++i) {
      if (!blank(items[i])) return true;
    }
    return false;
  }

  std::string join(std::size_t begin, std::size_t end) const {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) out += rstrip(items[i]) + "\n";
    while (out.size() > 1 && out.ends_with("\n\n")) out.pop_back();
    std::size_t lead = 0;
    while (lead < out.size() && out[lead] == '\n') ++lead;
    return out.substr(lead);
  }
};

/// Non-empty code block that parses; anything else counts as prose.
std::optional<AbortReason> check_block(const Lines& lines, std::size_t begin, std::size_t end,
                                       std::string& out) {
  if (!lines.any_text(begin, end)) return AbortReason::EmptyBlock;
  out = lines.join(begin, end);
  if (!lang::parse(out)) return AbortReason::ExtraProse;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(AbortReason r) noexcept {
  switch (r) {
    case AbortReason::MissingLabel: return "MissingLabel";
    case AbortReason::ExtraProse: return "ExtraProse";
    case AbortReason::EmptyBlock: return "EmptyBlock";
    case AbortReason::ProviderFailure: return "ProviderFailure";
  }
  return "?";
}

std::optional<AbortReason> parse_abort_reason(std::string_view s) noexcept {
  for (auto r : {AbortReason::MissingLabel, AbortReason::ExtraProse, AbortReason::EmptyBlock,
                 AbortReason::ProviderFailure}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

std::string ParsedResponse::code() const {
  if (board_type == BoardType::Regular) return output_block;
  return function_block + usage_block;
}

Expected<ParsedResponse, AbortReason> parse_response(std::string_view raw, BoardType board_type,
                                                     bool strict) {
  Lines lines{{}, strict};
  for (auto& l : split_lines(raw)) {
    if (!strict && is_fence(l)) continue;
    lines.items.push_back(std::move(l));
  }
  ParsedResponse parsed;
  parsed.board_type = board_type;
  parsed.raw = std::string(raw);
  const std::size_t n = lines.items.size();

  if (board_type == BoardType::Regular) {
    auto out = lines.find_label("Output:");
    if (!out) return unexpected(AbortReason::MissingLabel);
    if (lines.any_text(0, *out)) return unexpected(AbortReason::ExtraProse);
    if (auto bad = check_block(lines, *out + 1, n, parsed.output_block)) return unexpected(*bad);
    return parsed;
  }

  auto fn = lines.find_label("Function:");
  if (!fn) return unexpected(AbortReason::MissingLabel);
  auto usage = lines.find_label("Usage:", *fn + 1);
  if (!usage) return unexpected(AbortReason::MissingLabel);
  if (lines.any_text(0, *fn)) return unexpected(AbortReason::ExtraProse);
  if (auto bad = check_block(lines, *fn + 1, *usage, parsed.function_block)) {
    return unexpected(*bad);
  }
  if (auto bad = check_block(lines, *usage + 1, n, parsed.usage_block)) return unexpected(*bad);
  return parsed;
}

}  // namespace gridbench::protocol
