#include <algorithm>
#include <set>

#include "gridbench/metrics/metrics.hpp"

namespace gridbench::metrics {

using nlohmann::json;

namespace {

std::string label(const std::string& key, const std::string& value) {
  if (key == "board_type") return value == "simple" ? "SB" : value == "regular" ? "RB" : value;
  if (key == "instruction_type") return value == "synthetic" ? "ST" : value == "human" ? "HA" : value;
  if (key == "style") {
    std::string up = value;
    std::transform(up.begin(), up.end(), up.begin(), ::toupper);
    return up;
  }
  return value;
}

std::vector<std::string> ordered(const std::set<std::string>& seen,
                                 const std::vector<std::string>& preferred) {
  std::vector<std::string> out;
  for (const auto& p : preferred) {
    if (seen.contains(p)) out.push_back(p);
  }
  for (const auto& s : seen) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

std::vector<std::string> default_order(const std::string& key) {
  if (key == "board_type") return {"simple", "regular"};
  if (key == "instruction_type") return {"synthetic", "human"};
  if (key == "style") return {"fd", "fsg", "fsc"};
  return {};
}

}  // namespace

Expected<Table, std::string> performance_table(std::span<const EpisodeRecord> records,
                                               const std::string& row_key,
                                               const std::string& col_key,
                                               const std::vector<std::string>& col_order) {
  auto reports = group_reports(records, {row_key, col_key});
  if (!reports) return unexpected(reports.error());
  std::set<std::string> rows_seen, cols_seen;
  std::map<std::pair<std::string, std::string>, const MetricReport*> cell;
  for (const auto& r : *reports) {
    const auto key = std::make_pair(r.group.at(row_key), r.group.at(col_key));
    rows_seen.insert(key.first);
    cols_seen.insert(key.second);
    cell[key] = &r;
  }
  const auto cols = ordered(cols_seen, col_order.empty() ? default_order(col_key) : col_order);

  Table t;
  t.tsv = row_key;
  for (const auto& c : cols) {
    t.tsv += "\t" + label(col_key, c) + " abort\t" + label(col_key, c) + " success";
  }
  t.tsv += "\n";
  json rows = json::array();
  for (const auto& r : rows_seen) {
    t.tsv += r;
    json row = {{row_key, r}};
    for (const auto& c : cols) {
      auto it = cell.find({r, c});
      if (it == cell.end()) {
        t.tsv += "\t-\t-";
        t.notices.push_back("no episodes for " + row_key + "=" + r + ", " + col_key + "=" + c +
                            "; cell omitted");
        continue;
      }
      const auto& m = *it->second;
      t.tsv += "\t" + format_fixed(m.abort_rate, 2) + "\t" + format_fixed(m.success_rate, 2);
      row[label(col_key, c)] = {{"abort_rate", round_half_up(m.abort_rate, 2)},
                                {"success_rate", round_half_up(m.success_rate, 2)},
                                {"episodes", m.episodes}};
    }
    t.tsv += "\n";
    rows.push_back(row);
  }
  t.json = {{"rows", row_key}, {"columns", col_key}, {"table", rows}};
  return t;
}

Expected<Table, std::string> error_table(std::span<const EpisodeRecord> records,
                                         const std::string& row_key) {
  auto reports = group_reports(records, {row_key});
  if (!reports) return unexpected(reports.error());
  Table t;
  t.tsv = row_key + "\tepisodes\terrors\tboard placement %\telement mismatch %\n";
  json rows = json::array();
  for (const auto& m : *reports) {
    const std::size_t errors = m.placement_errors + m.mismatches;
    const std::string key = m.group.at(row_key);
    if (errors == 0) {
      // Every episode aborted or matched: nothing to split.
      t.tsv += key + "\t" + std::to_string(m.episodes) + "\t0\t-\t-\n";
      t.notices.push_back(row_key + "=" + key + " has no categorizable errors");
      rows.push_back({{row_key, key}, {"episodes", m.episodes}, {"errors", 0}});
      continue;
    }
    t.tsv += key + "\t" + std::to_string(m.episodes) + "\t" + std::to_string(errors) + "\t" +
             format_fixed(m.board_placement_pct, 1) + "\t" + format_fixed(m.element_mismatch_pct, 1) +
             "\n";
    rows.push_back({{row_key, key},
                    {"episodes", m.episodes},
                    {"errors", errors},
                    {"board_placement_pct", m.board_placement_pct},
                    {"element_mismatch_pct", m.element_mismatch_pct},
                    {"board_placement", m.error_breakdown}});
  }
  t.json = {{"rows", row_key}, {"table", rows}};
  return t;
}

Table similarity_table(const SimilarityReport& report) {
  Table t;
  t.tsv = report.grouped_by + "\tpairs\tBLEU median\tBLEU min-max\tES median\tES min-max\tSR\n";
  for (const auto& g : report.groups) {
    t.tsv += g.group + "\t" + std::to_string(g.pairs) + "\t" + format_fixed(g.bleu.median, 3) +
             "\t" + format_fixed(g.bleu.min, 3) + "-" + format_fixed(g.bleu.max, 3) + "\t";
    if (g.cosine) {
      t.tsv += format_fixed(g.cosine->median, 3) + "\t" + format_fixed(g.cosine->min, 3) + "-" +
               format_fixed(g.cosine->max, 3);
    } else {
      t.tsv += "-\t-";
    }
    t.tsv += "\t" + format_fixed(g.success_rate, 2) + "\n";
  }
  if (report.incomplete) t.notices.push_back("incomplete: " + report.note);
  t.json = report.to_json();
  return t;
}

json breakdown_json(const MetricReport& report) {
  return {{"group", report.group},
          {"aborts_excluded", report.aborts},
          {"errors", report.placement_errors + report.mismatches},
          {"split",
           {{"board_placement_pct", report.board_placement_pct},
            {"element_mismatch_pct", report.element_mismatch_pct}}},
          {"board_placement", report.error_breakdown}};
}

}  // namespace gridbench::metrics
