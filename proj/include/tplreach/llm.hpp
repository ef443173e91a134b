#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tplreach/callgraph.hpp"

namespace tplreach {

class ProviderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LlmRequest {
  std::string target_slug;  // stable per (m_dp, m_tpl)
  std::string prompt;
  int attempt = 1;  // 1-based
};

struct LlmResponse {
  std::string scenario_text;
};

/// Implementations must tolerate concurrent calls.
class LlmProvider {
 public:
  virtual ~LlmProvider() = default;
  virtual LlmResponse complete(const LlmRequest& request) = 0;
};

std::uint64_t fnv1a64(std::string_view text);

/// `<hash(m_dp)>_<hash(m_tpl)>`, 12 hex digits each.
std::string target_slug(const TargetKey& key);

/// Replays `<dir>/<slug>/<attempt>.txt`. A missing attempt falls back to the
/// highest numbered file below it, so one file can answer every retry.
class MockProvider : public LlmProvider {
 public:
  explicit MockProvider(std::string directory) : directory_(std::move(directory)) {}
  LlmResponse complete(const LlmRequest& request) override;

  std::size_t calls() const { return calls_.load(); }
  std::size_t calls_for(const std::string& slug) const;

 private:
  std::string directory_;
  std::atomic<std::size_t> calls_{0};
  mutable std::mutex mutex_;
  std::map<std::string, std::size_t> per_target_;
};

struct HttpProviderSettings {
  std::string base_url;  // e.g. http://localhost:8080/v1
  std::string model;
  std::string api_key_env = "FIKA_LLM_API_KEY";
  int timeout_seconds = 120;
};

/// Chat-completion endpoint: POST {base_url}/chat/completions with a single
/// user message. The reply's first choice is the scenario; a surrounding
/// markdown code fence is stripped.
class HttpChatProvider : public LlmProvider {
 public:
  explicit HttpChatProvider(HttpProviderSettings settings) : settings_(std::move(settings)) {}
  LlmResponse complete(const LlmRequest& request) override;

 private:
  HttpProviderSettings settings_;
};

/// Removes one enclosing ``` fence (with optional language tag) if present.
std::string strip_code_fence(const std::string& text);

/// `mock:<dir>` or `http` (settings taken from `http`). Throws ProviderError.
std::unique_ptr<LlmProvider> make_provider(const std::string& spec, const HttpProviderSettings& http = {});

}  // namespace tplreach
