#include "gridbench/metrics/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

namespace gridbench::metrics {

using nlohmann::json;
using Kind = Verdict::Kind;

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double mag = std::floor(std::abs(value) * scale + 0.5 + 1e-9) / scale;
  return value < 0 ? -mag : mag;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, round_half_up(value, decimals));
  return buf;
}

Expected<double, std::string> success_rate(std::span<const Verdict> verdicts) {
  if (verdicts.empty()) return unexpected(std::string("success rate of zero episodes is undefined"));
  const auto hits = std::count_if(verdicts.begin(), verdicts.end(), [](const Verdict& v) {
    return v.kind == Kind::Executed && v.matched;
  });
  return static_cast<double>(hits) / static_cast<double>(verdicts.size());
}

Expected<double, std::string> abort_rate(std::span<const Verdict> verdicts) {
  if (verdicts.empty()) return unexpected(std::string("abort rate of zero episodes is undefined"));
  const auto n = std::count_if(verdicts.begin(), verdicts.end(),
                               [](const Verdict& v) { return v.kind == Kind::Abort; });
  return static_cast<double>(n) / static_cast<double>(verdicts.size());
}

std::string_view to_string(ErrorClass c) noexcept {
  return c == ErrorClass::BoardPlacement ? "BoardPlacement" : "ElementMismatch";
}

Expected<Categorized, std::string> categorize(const Verdict& v) {
  switch (v.kind) {
    case Kind::Abort: return unexpected(std::string("aborted episodes are not categorized"));
    case Kind::ExecError: return Categorized{ErrorClass::BoardPlacement, v.category};
    case Kind::Executed:
      if (v.matched) return unexpected(std::string("matched episodes are not errors"));
      return Categorized{ErrorClass::ElementMismatch, std::nullopt};
  }
  return unexpected(std::string("unknown verdict kind"));
}

std::map<std::string, double> breakdown(const std::map<std::string, std::size_t>& counts,
                                        int decimals) {
  std::size_t total = 0;
  for (const auto& [k, n] : counts) total += n;
  std::map<std::string, double> out;
  if (total == 0) return out;
  for (const auto& [k, n] : counts) {
    out[k] = round_half_up(100.0 * static_cast<double>(n) / static_cast<double>(total), decimals);
  }
  return out;
}

Expected<std::string, std::string> group_value(const EpisodeRecord& r, const std::string& key) {
  if (key == "model") return r.model;
  if (key == "board_type") return r.board_type;
  if (key == "instruction_type") return r.instruction_type;
  if (key == "style") return r.style;
  if (key == "shots") return std::to_string(r.shots);
  if (key == "n_shapes") return std::to_string(r.n_shapes);
  if (key == "domain") return r.domain;
  return unexpected("unknown grouping key '" + key + "'");
}

json MetricReport::to_json() const {
  return {{"group", group},
          {"episodes", episodes},
          {"matches", matches},
          {"aborts", aborts},
          {"provider_failures", provider_failures},
          {"board_placement_errors", placement_errors},
          {"element_mismatches", mismatches},
          {"abort_rate", round_half_up(abort_rate, 2)},
          {"success_rate", round_half_up(success_rate, 2)},
          {"abort_rate_exact", abort_rate},
          {"success_rate_exact", success_rate},
          {"error_breakdown", error_breakdown},
          {"mismatch_split",
           {{"board_placement_pct", board_placement_pct},
            {"element_mismatch_pct", element_mismatch_pct}}}};
}

Expected<MetricReport, std::string> summarize(std::span<const EpisodeRecord> records) {
  if (records.empty()) return unexpected(std::string("no episodes to summarize"));
  MetricReport m;
  std::map<std::string, std::size_t> placement;
  std::vector<Verdict> verdicts;
  for (const auto& r : records) {
    verdicts.push_back(r.verdict);
    ++m.episodes;
    switch (r.verdict.kind) {
      case Kind::Abort:
        ++m.aborts;
        m.provider_failures += r.verdict.reason == protocol::AbortReason::ProviderFailure;
        break;
      case Kind::ExecError:
        ++m.placement_errors;
        ++placement[std::string(to_string(r.verdict.category))];
        break;
      case Kind::Executed:
        if (r.verdict.matched) {
          ++m.matches;
        } else {
          ++m.mismatches;
        }
        break;
    }
  }
  m.success_rate = *success_rate(verdicts);
  m.abort_rate = *abort_rate(verdicts);
  m.error_breakdown = breakdown(placement);
  const auto split = breakdown({{"board_placement", m.placement_errors},
                                {"element_mismatch", m.mismatches}});
  if (!split.empty()) {
    m.board_placement_pct = split.at("board_placement");
    m.element_mismatch_pct = split.at("element_mismatch");
  }
  return m;
}

Expected<std::vector<MetricReport>, std::string> group_reports(
    std::span<const EpisodeRecord> records, const std::vector<std::string>& keys) {
  std::map<std::vector<std::string>, std::vector<EpisodeRecord>> groups;
  for (const auto& r : records) {
    std::vector<std::string> values;
    for (const auto& k : keys) {
      auto v = group_value(r, k);
      if (!v) return unexpected(v.error());
      values.push_back(*v);
    }
    groups[values].push_back(r);
  }
  std::vector<MetricReport> out;
  for (const auto& [values, members] : groups) {
    auto m = summarize(members);
    if (!m) return unexpected(m.error());
    for (std::size_t i = 0; i < keys.size(); ++i) m->group[keys[i]] = values[i];
    out.push_back(std::move(*m));
  }
  return out;
}

}  // namespace gridbench::metrics
