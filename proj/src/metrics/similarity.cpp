#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "gridbench/metrics/metrics.hpp"
#include "gridbench/metrics/simd.hpp"
#include "gridbench/util.hpp"

namespace gridbench::metrics {

using nlohmann::json;

std::vector<std::string> tokenize(std::string_view text) {
  std::istringstream in(to_lower(text));
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

namespace {

using NGram = std::vector<std::string>;

std::map<NGram, int> ngram_counts(std::span<const std::string> toks, std::size_t n) {
  std::map<NGram, int> out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) ++out[NGram(toks.begin() + i, toks.begin() + i + n)];
  return out;
}

}  // namespace

double bleu(std::span<const std::string> candidate, std::span<const std::string> reference) {
  constexpr std::size_t kOrder = 4;
  if (candidate.empty()) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= kOrder; ++n) {
    const auto cand = ngram_counts(candidate, n);
    const auto ref = ngram_counts(reference, n);
    double matched = 0, total = 0;
    for (const auto& [g, c] : cand) {
      total += c;
      if (auto it = ref.find(g); it != ref.end()) matched += std::min(c, it->second);
    }
    double p;
    if (n == 1) {
      if (matched == 0) return 0.0;
      p = matched / total;
    } else {
      p = (matched + 1.0) / (total + 1.0);
    }
    log_sum += std::log(p);
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum / kOrder);
}

double sentence_bleu(std::string_view candidate, std::string_view reference) {
  const auto c = tokenize(candidate);
  const auto r = tokenize(reference);
  return bleu(c, r);
}

Expected<double, std::string> cosine_similarity(std::span<const double> u,
                                                std::span<const double> v) {
  if (u.size() != v.size()) return unexpected(std::string("cosine of vectors of unequal dimension"));
  const auto s = simd::active_kernel().sums(u.data(), v.data(), u.size());
  if (s.uu == 0 || s.vv == 0) return unexpected(std::string("cosine of a zero-norm vector"));
  return std::clamp(s.uv / (std::sqrt(s.uu) * std::sqrt(s.vv)), -1.0, 1.0);
}

Spread spread(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double median = n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
  return {median, values.front(), values.back()};
}

json SimilarityReport::to_json() const {
  json rows = json::array();
  auto s3 = [](const Spread& s) {
    return json{{"median", round_half_up(s.median, 3)},
                {"min", round_half_up(s.min, 3)},
                {"max", round_half_up(s.max, 3)}};
  };
  for (const auto& g : groups) {
    rows.push_back({{"group", g.group},
                    {"pairs", g.pairs},
                    {"bleu", s3(g.bleu)},
                    {"embed_cos", g.cosine ? s3(*g.cosine) : json(nullptr)},
                    {"success_rate", round_half_up(g.success_rate, 2)}});
  }
  return {{"grouped_by", grouped_by},
          {"bleu_variant", kBleuVariant},
          {"incomplete", incomplete},
          {"note", note},
          {"groups", rows}};
}

SimilarityReport similarity_report(std::span<const SimilarityPair> pairs,
                                   SimilarityGrouping grouping,
                                   llm::EmbeddingProvider& embedder) {
  SimilarityReport report;
  report.grouped_by = grouping == SimilarityGrouping::BoardType ? "board_type" : "n_shapes";

  std::vector<std::optional<double>> cosines(pairs.size());
  std::vector<std::string> texts;
  for (const auto& p : pairs) {
    texts.push_back(p.synthetic);
    texts.push_back(p.human);
  }
  if (!texts.empty()) {
    auto vecs = embedder.embed(texts);
    if (!vecs) {
      report.incomplete = true;
      report.note = "embedding provider failed (" + vecs.error().detail + "); cosine omitted";
    } else {
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto c = cosine_similarity((*vecs)[2 * i], (*vecs)[2 * i + 1]);
        if (c) {
          cosines[i] = *c;
        } else {
          report.incomplete = true;
          report.note = "some pairs had zero-norm embeddings; their cosine is omitted";
        }
      }
    }
  }

  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string key = grouping == SimilarityGrouping::BoardType
                                ? pairs[i].board_type
                                : std::to_string(pairs[i].n_shapes);
    members[key].push_back(i);
  }
  for (const auto& [key, idx] : members) {
    SimilarityStat stat;
    stat.group = key;
    stat.pairs = idx.size();
    std::vector<double> b, c;
    std::size_t hits = 0;
    for (auto i : idx) {
      b.push_back(sentence_bleu(pairs[i].human, pairs[i].synthetic));
      if (cosines[i]) c.push_back(*cosines[i]);
      hits += pairs[i].matched;
    }
    stat.bleu = spread(b);
    if (c.size() == idx.size()) stat.cosine = spread(c);
    stat.success_rate = static_cast<double>(hits) / static_cast<double>(idx.size());
    report.groups.push_back(std::move(stat));
  }
  return report;
}

}  // namespace gridbench::metrics
