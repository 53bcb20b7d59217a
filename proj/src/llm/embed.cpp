#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gridbench/llm/provider.hpp"
#include "gridbench/util.hpp"

namespace gridbench::llm {

using nlohmann::json;

Expected<std::vector<Vector>, ProviderError> LengthEmbedder::embed(
    std::span<const std::string> texts) {
  std::vector<Vector> out;
  for (const auto& t : texts) out.push_back({static_cast<double>(t.size()), 1.0});
  return out;
}

Expected<std::vector<Vector>, ProviderError> HashingEmbedder::embed(
    std::span<const std::string> texts) {
  std::vector<Vector> out;
  for (const auto& t : texts) {
    Vector v(dims_, 0.0);
    std::istringstream words(to_lower(t));
    std::string w;
    while (words >> w) {
      const auto h = fnv1a(w);
      v[h % dims_] += (h >> 63) ? -1.0 : 1.0;
    }
    out.push_back(std::move(v));
  }
  return out;
}

CachedEmbedder::CachedEmbedder(std::shared_ptr<EmbeddingProvider> inner)
    : inner_(std::move(inner)) {}

std::string CachedEmbedder::key(const std::string& text) const {
  return inner_->provider_id() + "|" + inner_->model_id() + "|" + sha256_hex(text);
}

Expected<std::vector<Vector>, ProviderError> CachedEmbedder::embed(
    std::span<const std::string> texts) {
  std::lock_guard lock(mu_);
  std::vector<std::string> keys;
  std::vector<std::string> misses;
  std::set<std::string> queued;
  for (const auto& t : texts) {
    keys.push_back(key(t));
    if (!cache_.contains(keys.back()) && queued.insert(keys.back()).second) misses.push_back(t);
  }
  if (!misses.empty()) {
    ++upstream_calls_;
    auto fresh = inner_->embed(misses);
    if (!fresh) return unexpected(fresh.error());
    if (fresh->size() != misses.size()) {
      return unexpected(ProviderError{ProviderErrorKind::BadResponse,
                                      "embedding count does not match input count"});
    }
    for (const auto& v : *fresh) {
      if (dims_ && v.size() != *dims_) {
        return unexpected(ProviderError{
            ProviderErrorKind::BadResponse,
            "embedding dimension drift: " + std::to_string(v.size()) + " vs " +
                std::to_string(*dims_)});
      }
      dims_ = v.size();
    }
    for (std::size_t i = 0; i < misses.size(); ++i) cache_[key(misses[i])] = (*fresh)[i];
  }
  std::vector<Vector> out;
  for (const auto& k : keys) out.push_back(cache_.at(k));
  return out;
}

std::size_t CachedEmbedder::upstream_calls() const {
  std::lock_guard lock(mu_);
  return upstream_calls_;
}

std::size_t CachedEmbedder::size() const {
  std::lock_guard lock(mu_);
  return cache_.size();
}

Expected<std::size_t, std::string> CachedEmbedder::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return unexpected("cannot open embedding cache " + path);
  std::lock_guard lock(mu_);
  std::string line;
  std::size_t n = 0;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("key") || !j.contains("vector")) {
      return unexpected(path + ":" + std::to_string(lineno) + ": expected {key, vector}");
    }
    Vector v = j["vector"].get<Vector>();
    if (dims_ && v.size() != *dims_) {
      return unexpected(path + ":" + std::to_string(lineno) + ": embedding dimension drift");
    }
    dims_ = v.size();
    cache_[j["key"].get<std::string>()] = std::move(v);
    ++n;
  }
  return n;
}

Expected<std::size_t, std::string> CachedEmbedder::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) return unexpected("cannot write embedding cache " + path);
  std::lock_guard lock(mu_);
  for (const auto& [k, v] : cache_) out << json{{"key", k}, {"vector", v}}.dump() << '\n';
  return cache_.size();
}

}  // namespace gridbench::llm
