#include "gridbench/llm/provider.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace gridbench::llm {

using nlohmann::json;

namespace {

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

}  // namespace

ProviderConfig ProviderConfig::chat_from_env(std::string model) {
  ProviderConfig c;
  c.base_url = env_or_empty("MODEL_API_BASE");
  c.api_key_env = "MODEL_API_KEY";
  c.model = std::move(model);
  return c;
}

ProviderConfig ProviderConfig::embed_from_env(std::string model) {
  ProviderConfig c;
  c.base_url = env_or_empty("EMBED_API_BASE");
  c.api_key_env = "EMBED_API_KEY";
  c.model = std::move(model);
  return c;
}

Expected<ProviderConfig, std::string> ProviderConfig::from_json(const json& j) {
  if (!j.is_object()) return unexpected(std::string("model config must be a JSON object"));
  ProviderConfig c;
  try {
    if (!j.contains("model")) return unexpected(std::string("model config: missing \"model\""));
    c.model = j.at("model").get<std::string>();
    c.base_url = j.value("base_url", env_or_empty("MODEL_API_BASE"));
    c.api_key_env = j.value("api_key_env", std::string("MODEL_API_KEY"));
    c.timeout = std::chrono::milliseconds(j.value("timeout_ms", 60'000));
    c.max_retries = j.value("max_retries", 1);
    c.parallelism = j.value("parallelism", 4);
    c.temperature = j.value("temperature", 0.0);
    c.max_tokens = j.value("max_tokens", 1024);
  } catch (const json::exception& e) {
    return unexpected(std::string("model config: ") + e.what());
  }
  if (j.contains("api_key")) {
    return unexpected(std::string("model config: put the key in an environment variable and "
                                  "name it with \"api_key_env\""));
  }
  if (c.max_retries < 0 || c.parallelism < 1) {
    return unexpected(std::string("model config: max_retries >= 0 and parallelism >= 1"));
  }
  return c;
}

json ProviderConfig::to_json() const {
  return {{"base_url", base_url},       {"model", model},
          {"api_key_env", api_key_env}, {"timeout_ms", timeout.count()},
          {"max_retries", max_retries}, {"parallelism", parallelism},
          {"temperature", temperature}, {"max_tokens", max_tokens}};
}

std::string_view to_string(ProviderErrorKind k) noexcept {
  switch (k) {
    case ProviderErrorKind::Transport: return "transport";
    case ProviderErrorKind::Timeout: return "timeout";
    case ProviderErrorKind::HttpStatus: return "http_status";
    case ProviderErrorKind::BadResponse: return "bad_response";
    case ProviderErrorKind::ScriptMissing: return "script_missing";
    case ProviderErrorKind::Config: return "config";
  }
  return "?";
}

bool ProviderError::retryable() const noexcept {
  switch (kind) {
    case ProviderErrorKind::Transport:
    case ProviderErrorKind::Timeout: return true;
    case ProviderErrorKind::HttpStatus: return status == 429 || status >= 500;
    default: return false;
  }
}

// ---- mock ----

MockChatProvider::MockChatProvider(Script script, std::string model)
    : script_(std::move(script)), model_(std::move(model)) {}

std::unique_ptr<MockChatProvider> MockChatProvider::constant(std::string reply,
                                                             std::string model) {
  auto p = std::make_unique<MockChatProvider>(Script{}, std::move(model));
  p->fallback_ = std::move(reply);
  return p;
}

Expected<MockChatProvider::Script, std::string> MockChatProvider::parse_script(const json& j) {
  if (!j.is_object()) return unexpected(std::string("mock script must map task ids to replies"));
  Script s;
  for (const auto& [id, v] : j.items()) {
    if (v.is_string()) {
      s[id] = {v.get<std::string>()};
    } else if (v.is_array() && !v.empty() &&
               std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_string(); })) {
      s[id] = v.get<std::vector<std::string>>();
    } else {
      return unexpected("mock script entry '" + id + "' must be a string or list of strings");
    }
  }
  return s;
}

Expected<std::unique_ptr<MockChatProvider>, std::string> MockChatProvider::from_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) return unexpected("cannot open mock script " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) return unexpected("mock script " + path + " is not valid JSON");
  auto script = parse_script(j);
  if (!script) return unexpected(script.error());
  return std::make_unique<MockChatProvider>(std::move(*script), "mock:" + path);
}

Expected<std::string, ProviderError> MockChatProvider::complete(std::span<const ChatMessage>,
                                                                const RequestContext& ctx) {
  ++calls_;
  if (fallback_) return *fallback_;
  auto it = script_.find(ctx.task_id);
  if (it == script_.end()) {
    return unexpected(ProviderError{ProviderErrorKind::ScriptMissing,
                                    "no scripted response for task " + ctx.task_id});
  }
  const auto& turns = it->second;
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(std::max(ctx.turn, 0)),
                                       turns.size() - 1);
  return turns[i];
}

std::vector<std::string> MockChatProvider::missing(std::span<const std::string> task_ids) const {
  std::vector<std::string> out;
  if (fallback_) return out;
  for (const auto& id : task_ids) {
    if (!script_.contains(id)) out.push_back(id);
  }
  return out;
}

// ---- retry ----

std::vector<std::chrono::milliseconds> backoff_schedule(const RetryPolicy& policy) {
  std::vector<std::chrono::milliseconds> out;
  double next = static_cast<double>(policy.initial_backoff.count());
  const double factor = std::max(policy.multiplier, 1.0);
  for (int i = 0; i < policy.max_retries; ++i) {
    out.emplace_back(static_cast<std::int64_t>(next));
    next *= factor;
  }
  return out;
}

RetryingChatProvider::RetryingChatProvider(std::shared_ptr<ChatProvider> inner,
                                           RetryPolicy policy, Sleeper sleep)
    : inner_(std::move(inner)), policy_(policy), sleep_(std::move(sleep)) {
  if (!sleep_) sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

Expected<std::string, ProviderError> RetryingChatProvider::complete(
    std::span<const ChatMessage> messages, const RequestContext& ctx) {
  const auto delays = backoff_schedule(policy_);
  for (std::size_t attempt = 0;; ++attempt) {
    ++attempts_;
    auto r = inner_->complete(messages, ctx);
    if (r || !r.error().retryable() || attempt >= delays.size()) return r;
    sleep_(delays[attempt]);
  }
}

}  // namespace gridbench::llm
