#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "gridbench/errors.hpp"
#include "gridbench/expected.hpp"
#include "gridbench/llm/provider.hpp"
#include "gridbench/protocol/episode.hpp"

namespace gridbench::metrics {

using protocol::EpisodeRecord;
using protocol::Verdict;

/// Half-up rounding at `decimals` places, robust to binary representation
/// (0.125 -> 0.13, 0.0538 -> 0.05).
double round_half_up(double value, int decimals);
std::string format_fixed(double value, int decimals);

Expected<double, std::string> success_rate(std::span<const Verdict> verdicts);
Expected<double, std::string> abort_rate(std::span<const Verdict> verdicts);

enum class ErrorClass { BoardPlacement, ElementMismatch };

std::string_view to_string(ErrorClass c) noexcept;

struct Categorized {
  ErrorClass error_class;
  std::optional<ErrorCategory> category;  // BoardPlacement only
  friend bool operator==(const Categorized&, const Categorized&) = default;
};

/// Defined for failed, non-aborted verdicts only.
Expected<Categorized, std::string> categorize(const Verdict& v);

/// Percentages of `counts` at `decimals` places; empty when counts sum to 0.
std::map<std::string, double> breakdown(const std::map<std::string, std::size_t>& counts,
                                        int decimals = 1);

/// Record fields usable for grouping: model, board_type, instruction_type,
/// style, shots, n_shapes, domain.
Expected<std::string, std::string> group_value(const EpisodeRecord& r, const std::string& key);

struct MetricReport {
  std::map<std::string, std::string> group;
  std::size_t episodes = 0;
  std::size_t matches = 0;
  std::size_t aborts = 0;
  std::size_t provider_failures = 0;  // subset of aborts
  std::size_t placement_errors = 0;
  std::size_t mismatches = 0;
  double abort_rate = 0;
  double success_rate = 0;
  /// Board-placement subcategory -> percent of placement errors.
  std::map<std::string, double> error_breakdown;
  /// Shares of all errors (aborts excluded).
  double board_placement_pct = 0;
  double element_mismatch_pct = 0;

  nlohmann::json to_json() const;
};

Expected<MetricReport, std::string> summarize(std::span<const EpisodeRecord> records);

/// One report per distinct combination of `keys`, in key order.
Expected<std::vector<MetricReport>, std::string> group_reports(
    std::span<const EpisodeRecord> records, const std::vector<std::string>& keys);

// ---- similarity ----

/// Lowercased whitespace tokens.
std::vector<std::string> tokenize(std::string_view text);

/// Sentence BLEU: order 4, clipped counts, add-one smoothing for n >= 2,
/// standard brevity penalty. Empty candidate scores 0.
double bleu(std::span<const std::string> candidate, std::span<const std::string> reference);
double sentence_bleu(std::string_view candidate, std::string_view reference);

inline constexpr const char* kBleuVariant =
    "sentence BLEU, order 4, add-one smoothing on orders 2-4, lowercase whitespace tokens";

Expected<double, std::string> cosine_similarity(std::span<const double> u,
                                                std::span<const double> v);

struct SimilarityPair {
  std::string synthetic;
  std::string human;
  int n_shapes = 0;
  std::string board_type;
  bool matched = false;
};

struct Spread {
  double median = 0, min = 0, max = 0;
};

/// Median of a non-empty list; mean of the middle two for even sizes.
Spread spread(std::vector<double> values);

struct SimilarityStat {
  std::string group;
  std::size_t pairs = 0;
  Spread bleu;
  std::optional<Spread> cosine;  // absent when embeddings failed
  double success_rate = 0;
};

enum class SimilarityGrouping { BoardType, NShapes };

struct SimilarityReport {
  std::string grouped_by;
  std::vector<SimilarityStat> groups;
  bool incomplete = false;
  std::string note;
  nlohmann::json to_json() const;
};

/// BLEU uses the human text as candidate and the synthetic one as reference.
SimilarityReport similarity_report(std::span<const SimilarityPair> pairs,
                                   SimilarityGrouping grouping,
                                   llm::EmbeddingProvider& embedder);

// ---- tables ----

struct Table {
  std::string tsv;
  nlohmann::json json;
  std::vector<std::string> notices;
};

/// Rows by `row_key`, one abort/success column pair per value of `col_key`
/// (e.g. model x board_type, model x style, model x instruction_type).
Expected<Table, std::string> performance_table(std::span<const EpisodeRecord> records,
                                               const std::string& row_key,
                                               const std::string& col_key,
                                               const std::vector<std::string>& col_order = {});

/// Placement vs mismatch shares per row.
Expected<Table, std::string> error_table(std::span<const EpisodeRecord> records,
                                         const std::string& row_key);

/// Median (min-max) BLEU and cosine plus success per group.
Table similarity_table(const SimilarityReport& report);

/// Pie data: top split and placement subcategories.
nlohmann::json breakdown_json(const MetricReport& report);

}  // namespace gridbench::metrics
