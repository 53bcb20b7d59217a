#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "gridbench/expected.hpp"

namespace gridbench::llm {

struct ProviderConfig {
  std::string base_url;
  std::string model;
  std::string api_key_env;  // name of the variable, never the key itself
  std::chrono::milliseconds timeout{60'000};
  int max_retries = 1;
  int parallelism = 4;
  double temperature = 0.0;
  int max_tokens = 1024;

  /// MODEL_API_BASE / MODEL_API_KEY.
  static ProviderConfig chat_from_env(std::string model);
  /// EMBED_API_BASE / EMBED_API_KEY.
  static ProviderConfig embed_from_env(std::string model);
  static Expected<ProviderConfig, std::string> from_json(const nlohmann::json& j);
  /// Safe to log: contains the variable name only.
  nlohmann::json to_json() const;
};

struct ChatMessage {
  std::string role;
  std::string content;
  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

enum class ProviderErrorKind { Transport, Timeout, HttpStatus, BadResponse, ScriptMissing, Config };

std::string_view to_string(ProviderErrorKind k) noexcept;

struct ProviderError {
  ProviderErrorKind kind;
  std::string detail;
  int status = 0;

  /// Transport faults, timeouts, 429 and 5xx are worth another attempt.
  bool retryable() const noexcept;
};

struct RequestContext {
  std::string task_id;
  int turn = 0;
};

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual Expected<std::string, ProviderError> complete(std::span<const ChatMessage> messages,
                                                        const RequestContext& ctx) = 0;
  virtual std::string model_id() const = 0;
};

/// Canned responses per task id, one entry per turn. The last entry is reused
/// when a task has more turns than scripted responses.
class MockChatProvider final : public ChatProvider {
 public:
  using Script = std::map<std::string, std::vector<std::string>>;

  explicit MockChatProvider(Script script, std::string model = "mock-scripted");
  /// Same reply for every request.
  static std::unique_ptr<MockChatProvider> constant(std::string reply,
                                                    std::string model = "mock-constant");
  /// Script file: {"task id": "text" | ["turn 1", "turn 2", ...], ...}.
  static Expected<std::unique_ptr<MockChatProvider>, std::string> from_file(
      const std::string& path);
  static Expected<Script, std::string> parse_script(const nlohmann::json& j);

  Expected<std::string, ProviderError> complete(std::span<const ChatMessage> messages,
                                                const RequestContext& ctx) override;
  std::string model_id() const override { return model_; }

  /// Task ids absent from the script; a run should refuse to start unless empty.
  std::vector<std::string> missing(std::span<const std::string> task_ids) const;
  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  Script script_;
  std::optional<std::string> fallback_;
  std::string model_;
  std::atomic<std::size_t> calls_{0};
};

/// JSON chat-completions client (POST {base}/chat/completions).
class HttpChatProvider final : public ChatProvider {
 public:
  explicit HttpChatProvider(ProviderConfig config);
  Expected<std::string, ProviderError> complete(std::span<const ChatMessage> messages,
                                                const RequestContext& ctx) override;
  std::string model_id() const override { return config_.model; }

  static nlohmann::json request_body(const ProviderConfig& config,
                                     std::span<const ChatMessage> messages);
  static Expected<std::string, ProviderError> parse_reply(const std::string& body);

 private:
  ProviderConfig config_;
  std::counting_semaphore<> slots_;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

struct RetryPolicy {
  int max_retries = 1;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
};

/// Backoff delays for attempts 2..n; non-decreasing by construction.
std::vector<std::chrono::milliseconds> backoff_schedule(const RetryPolicy& policy);

class RetryingChatProvider final : public ChatProvider {
 public:
  RetryingChatProvider(std::shared_ptr<ChatProvider> inner, RetryPolicy policy,
                       Sleeper sleep = {});
  Expected<std::string, ProviderError> complete(std::span<const ChatMessage> messages,
                                                const RequestContext& ctx) override;
  std::string model_id() const override { return inner_->model_id(); }
  std::size_t attempts() const noexcept { return attempts_.load(); }

 private:
  std::shared_ptr<ChatProvider> inner_;
  RetryPolicy policy_;
  Sleeper sleep_;
  std::atomic<std::size_t> attempts_{0};
};

using Vector = std::vector<double>;

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual Expected<std::vector<Vector>, ProviderError> embed(
      std::span<const std::string> texts) = 0;
  virtual std::string provider_id() const = 0;
  virtual std::string model_id() const = 0;
};

/// POST {base}/embeddings with {"model", "input": [...]}.
class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(ProviderConfig config);
  Expected<std::vector<Vector>, ProviderError> embed(std::span<const std::string> texts) override;
  std::string provider_id() const override { return config_.base_url; }
  std::string model_id() const override { return config_.model; }

  static Expected<std::vector<Vector>, ProviderError> parse_reply(const std::string& body,
                                                                  std::size_t expected);

 private:
  ProviderConfig config_;
  std::counting_semaphore<> slots_;
};

/// text -> (length in bytes, 1).
class LengthEmbedder final : public EmbeddingProvider {
 public:
  Expected<std::vector<Vector>, ProviderError> embed(std::span<const std::string> texts) override;
  std::string provider_id() const override { return "mock"; }
  std::string model_id() const override { return "length-2d"; }
};

/// Offline bag-of-words embedder: lowercased tokens hashed into signed buckets.
class HashingEmbedder final : public EmbeddingProvider {
 public:
  explicit HashingEmbedder(std::size_t dims = 256) : dims_(dims) {}
  Expected<std::vector<Vector>, ProviderError> embed(std::span<const std::string> texts) override;
  std::string provider_id() const override { return "local"; }
  std::string model_id() const override { return "hashing-" + std::to_string(dims_); }

 private:
  std::size_t dims_;
};

/// Memoizes vectors by (provider, model, sha256(text)); thread-safe.
class CachedEmbedder final : public EmbeddingProvider {
 public:
  explicit CachedEmbedder(std::shared_ptr<EmbeddingProvider> inner);
  Expected<std::vector<Vector>, ProviderError> embed(std::span<const std::string> texts) override;
  std::string provider_id() const override { return inner_->provider_id(); }
  std::string model_id() const override { return inner_->model_id(); }

  /// Inner provider invocations so far.
  std::size_t upstream_calls() const;
  std::size_t size() const;
  /// JSONL of {"key", "vector"}; load merges into the current cache.
  Expected<std::size_t, std::string> load(const std::string& path);
  Expected<std::size_t, std::string> save(const std::string& path) const;

 private:
  std::string key(const std::string& text) const;

  std::shared_ptr<EmbeddingProvider> inner_;
  mutable std::mutex mu_;
  std::map<std::string, Vector> cache_;
  std::optional<std::size_t> dims_;
  std::size_t upstream_calls_ = 0;
};

/// Requests sent over the network by any HTTP provider in this process.
std::size_t network_requests() noexcept;

}  // namespace gridbench::llm
