#include <algorithm>
#include <cstdlib>
#include <regex>

#include "httplib.h"
#include "gridbench/llm/provider.hpp"

namespace gridbench::llm {

using nlohmann::json;

namespace {

std::atomic<std::size_t> g_network_requests{0};

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing slash
};

Expected<Endpoint, ProviderError> split_url(const std::string& base) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(base, m, re)) {
    return unexpected(ProviderError{ProviderErrorKind::Config,
                                    "base URL must look like http(s)://host[:port][/path]"});
  }
  std::string prefix = m[2].matched ? m[2].str() : std::string();
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return Endpoint{m[1].str(), prefix};
}

Expected<std::string, ProviderError> post_json(const ProviderConfig& config,
                                               std::counting_semaphore<>& slots,
                                               const std::string& path, const json& body) {
  auto ep = split_url(config.base_url);
  if (!ep) return unexpected(ep.error());

  httplib::Client client(ep->origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!config.api_key_env.empty()) {
    if (const char* key = std::getenv(config.api_key_env.c_str()); key && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }

  slots.acquire();
  ++g_network_requests;
  auto res = client.Post(ep->prefix + path, headers, body.dump(), "application/json");
  slots.release();

  if (!res) {
    const auto err = res.error();
    const auto kind = err == httplib::Error::Read || err == httplib::Error::Write
                          ? ProviderErrorKind::Timeout
                          : ProviderErrorKind::Transport;
    return unexpected(ProviderError{kind, httplib::to_string(err)});
  }
  if (res->status != 200) {
    return unexpected(ProviderError{ProviderErrorKind::HttpStatus,
                                    "HTTP " + std::to_string(res->status), res->status});
  }
  return res->body;
}

}  // namespace

std::size_t network_requests() noexcept { return g_network_requests.load(); }

HttpChatProvider::HttpChatProvider(ProviderConfig config)
    : config_(std::move(config)), slots_(std::max(config_.parallelism, 1)) {}

json HttpChatProvider::request_body(const ProviderConfig& config,
                                    std::span<const ChatMessage> messages) {
  json msgs = json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  return {{"model", config.model},
          {"messages", std::move(msgs)},
          {"temperature", config.temperature},
          {"max_tokens", config.max_tokens},
          {"n", 1},
          {"stream", false}};
}

Expected<std::string, ProviderError> HttpChatProvider::parse_reply(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    return unexpected(ProviderError{ProviderErrorKind::BadResponse, "reply is not JSON"});
  }
  const json* content = nullptr;
  if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
    const json& first = j["choices"][0];
    if (first.contains("message") && first["message"].contains("content")) {
      content = &first["message"]["content"];
    }
  }
  if (!content || !content->is_string()) {
    return unexpected(ProviderError{ProviderErrorKind::BadResponse,
                                    "reply lacks choices[0].message.content"});
  }
  return content->get<std::string>();
}

Expected<std::string, ProviderError> HttpChatProvider::complete(
    std::span<const ChatMessage> messages, const RequestContext&) {
  auto body = post_json(config_, slots_, "/chat/completions", request_body(config_, messages));
  if (!body) return unexpected(body.error());
  return parse_reply(*body);
}

HttpEmbeddingProvider::HttpEmbeddingProvider(ProviderConfig config)
    : config_(std::move(config)), slots_(std::max(config_.parallelism, 1)) {}

Expected<std::vector<Vector>, ProviderError> HttpEmbeddingProvider::parse_reply(
    const std::string& body, std::size_t expected) {
  json j = json::parse(body, nullptr, false);
  auto bad = [](std::string d) {
    return unexpected(ProviderError{ProviderErrorKind::BadResponse, std::move(d)});
  };
  if (j.is_discarded() || !j.contains("data") || !j["data"].is_array()) {
    return bad("reply lacks a data array");
  }
  std::vector<Vector> out(expected);
  std::vector<bool> filled(expected, false);
  for (const json& item : j["data"]) {
    if (!item.contains("index") || !item["index"].is_number_unsigned() ||
        !item.contains("embedding") || !item["embedding"].is_array()) {
      return bad("data entries need index and embedding");
    }
    const auto i = item["index"].get<std::size_t>();
    if (i >= expected || filled[i]) return bad("embedding index out of range or repeated");
    try {
      out[i] = item["embedding"].get<Vector>();
    } catch (const json::exception&) {
      return bad("embedding must be numeric");
    }
    filled[i] = true;
  }
  if (std::find(filled.begin(), filled.end(), false) != filled.end()) {
    return bad("reply has fewer embeddings than inputs");
  }
  return out;
}

Expected<std::vector<Vector>, ProviderError> HttpEmbeddingProvider::embed(
    std::span<const std::string> texts) {
  json body = {{"model", config_.model},
               {"input", std::vector<std::string>(texts.begin(), texts.end())}};
  auto reply = post_json(config_, slots_, "/embeddings", body);
  if (!reply) return unexpected(reply.error());
  return parse_reply(*reply, texts.size());
}

}  // namespace gridbench::llm
