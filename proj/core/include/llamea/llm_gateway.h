// Copyright 2026 The LLaMEA-cpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LLAMEA_LLM_GATEWAY_H_
#define LLAMEA_LLM_GATEWAY_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace llamea {

inline constexpr double kDefaultTemperature = 0.8;
inline constexpr double kDefaultTopP = 1.0;

struct ChatMessage {
  std::string role;
  std::string content;
  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  std::optional<double> temperature;  // unset: kDefaultTemperature
  std::optional<double> top_p;        // unset: kDefaultTopP
};

// Copy of `req` with unset sampling parameters filled in.
ChatRequest WithDefaults(ChatRequest req);

// Wire body: {"model", "messages", "temperature", "top_p"}; defaults applied.
std::string RequestBody(const ChatRequest& req);

struct TokenUsage {
  int64_t prompt_tokens = 0;
  int64_t completion_tokens = 0;
};

struct ChatResponse {
  std::string content;
  TokenUsage usage;
  std::chrono::milliseconds latency{0};
};

// One chat turn. Implementations are interchangeable; the evolution loop
// never knows which one it talks to.
class Gateway {
 public:
  virtual ~Gateway() = default;
  virtual ChatResponse Complete(const ChatRequest& req) = 0;
};

// Returns scripted contents in order; throws ScriptExhausted afterwards.
class ScriptedGateway : public Gateway {
 public:
  explicit ScriptedGateway(std::vector<std::string> script);
  ChatResponse Complete(const ChatRequest& req) override;

  // Skips the first n script entries (used when resuming a session).
  void Advance(size_t n);
  size_t calls() const;
  std::vector<ChatRequest> requests() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> script_;
  size_t next_ = 0;
  std::vector<ChatRequest> requests_;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{1000};
  std::chrono::milliseconds max_delay{60000};
  double jitter = 0.25;  // fraction of the delay added at random

  // base * 2^attempt (attempt is 0-based) plus jitter, capped at max_delay.
  std::chrono::milliseconds Delay(int attempt, double unit_random) const;
};

struct HttpGatewayConfig {
  // Full chat-completion endpoint, e.g. https://api.openai.com/v1/chat/completions
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string api_key_env = "OPENAI_API_KEY";
  // An empty key is allowed only when this is false (local stub servers).
  bool require_api_key = true;
  RetryPolicy retry;
  std::chrono::seconds timeout{600};
  // Injectable for tests; defaults to std::this_thread::sleep_for.
  std::function<void(std::chrono::milliseconds)> sleep;
};

// POSTs chat-completion JSON. Retries transport errors, 429 and 5xx;
// honors Retry-After on 429. Throws ConfigError when the credential is
// missing and GatewayError once retries are exhausted.
class HttpGateway : public Gateway {
 public:
  explicit HttpGateway(HttpGatewayConfig config);
  ChatResponse Complete(const ChatRequest& req) override;

 private:
  HttpGatewayConfig config_;
  std::string api_key_;
  std::string scheme_host_port_;
  std::string path_;
};

// Forwards to `inner` and appends each request/response pair as one JSON
// line to `path`.
class RecordingGateway : public Gateway {
 public:
  RecordingGateway(Gateway& inner, std::filesystem::path path);
  ChatResponse Complete(const ChatRequest& req) override;

 private:
  Gateway& inner_;
  std::filesystem::path path_;
  std::mutex mu_;
};

// Serves responses from a recording in order. A request that differs from
// the next recorded one, or a call past the end, throws ReplayMiss.
class ReplayGateway : public Gateway {
 public:
  explicit ReplayGateway(const std::filesystem::path& path);
  ChatResponse Complete(const ChatRequest& req) override;
  void Advance(size_t n);
  size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::string request_body;
    ChatResponse response;
  };
  std::vector<Entry> entries_;
  size_t next_ = 0;
  std::mutex mu_;
};

// Number of request/response pairs in a recording (0 if the file is absent).
size_t CountRecordedTurns(const std::filesystem::path& path);

}  // namespace llamea

#endif  // LLAMEA_LLM_GATEWAY_H_
