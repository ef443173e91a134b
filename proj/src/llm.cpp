#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "tplreach/llm.hpp"

#include <httplib.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tplreach {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string target_slug(const TargetKey& key) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%012llx_%012llx",
                static_cast<unsigned long long>(fnv1a64(key.direct_caller) & 0xffffffffffffULL),
                static_cast<unsigned long long>(fnv1a64(key.tpl_method) & 0xffffffffffffULL));
  return buf;
}

LlmResponse MockProvider::complete(const LlmRequest& request) {
  calls_.fetch_add(1);
  {
    std::lock_guard lock(mutex_);
    ++per_target_[request.target_slug];
  }
  const fs::path dir = fs::path(directory_) / request.target_slug;
  for (int k = request.attempt; k >= 1; --k) {
    const fs::path file = dir / (std::to_string(k) + ".txt");
    std::ifstream in(file, std::ios::binary);
    if (!in) continue;
    std::ostringstream buf;
    buf << in.rdbuf();
    return {buf.str()};
  }
  throw ProviderError("mock provider has no response for " + request.target_slug + " attempt " +
                      std::to_string(request.attempt) + " under " + directory_);
}

std::size_t MockProvider::calls_for(const std::string& slug) const {
  std::lock_guard lock(mutex_);
  auto it = per_target_.find(slug);
  return it == per_target_.end() ? 0 : it->second;
}

std::string strip_code_fence(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text.compare(first, 3, "```") != 0) return text;
  auto body = text.find('\n', first);
  auto close = text.rfind("```");
  if (body == std::string::npos || close <= body) return text;
  return text.substr(body + 1, close - body - 1);
}

LlmResponse HttpChatProvider::complete(const LlmRequest& request) {
  const char* key = std::getenv(settings_.api_key_env.c_str());
  if (settings_.base_url.empty()) throw ProviderError("http provider needs a base URL");

  // Split "scheme://host[:port]" from the path prefix.
  std::string origin = settings_.base_url;
  std::string prefix;
  auto scheme_end = origin.find("://");
  auto path_start = origin.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start != std::string::npos) {
    prefix = origin.substr(path_start);
    origin.erase(path_start);
  }
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  nlohmann::json body = {{"model", settings_.model},
                         {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})}};
  httplib::Headers headers;
  if (key && *key) headers.emplace("Authorization", std::string("Bearer ") + key);

  httplib::Client client(origin);
  client.set_connection_timeout(settings_.timeout_seconds, 0);
  client.set_read_timeout(settings_.timeout_seconds, 0);
  auto res = client.Post(prefix + "/chat/completions", headers, body.dump(), "application/json");
  if (!res) throw ProviderError("request to " + settings_.base_url + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw ProviderError("provider returned HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
  try {
    auto doc = nlohmann::json::parse(res->body);
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    return {strip_code_fence(content.get<std::string>())};
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(std::string("malformed provider reply: ") + e.what());
  }
}

std::unique_ptr<LlmProvider> make_provider(const std::string& spec, const HttpProviderSettings& http) {
  if (spec.starts_with("mock:")) {
    auto dir = spec.substr(5);
    if (dir.empty()) throw ProviderError("mock provider needs a directory");
    return std::make_unique<MockProvider>(dir);
  }
  if (spec == "http") return std::make_unique<HttpChatProvider>(http);
  throw ProviderError("unknown llm provider '" + spec + "' (expected mock:<dir> or http)");
}

}  // namespace tplreach
