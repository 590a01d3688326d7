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

#include "llamea/llm_gateway.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "llamea/errors.h"

namespace llamea {
namespace {

using json = nlohmann::ordered_json;

json RequestJson(const ChatRequest& raw) {
  const ChatRequest req = WithDefaults(raw);
  json messages = json::array();
  for (const ChatMessage& m : req.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  return {{"model", req.model},
          {"messages", std::move(messages)},
          {"temperature", *req.temperature},
          {"top_p", *req.top_p}};
}

json ResponseJson(const ChatResponse& resp) {
  return {{"content", resp.content},
          {"usage",
           {{"prompt_tokens", resp.usage.prompt_tokens},
            {"completion_tokens", resp.usage.completion_tokens}}},
          {"latency_ms", resp.latency.count()}};
}

ChatResponse ResponseFromJson(const json& j) {
  ChatResponse r;
  r.content = j.at("content").get<std::string>();
  if (j.contains("usage")) {
    r.usage.prompt_tokens = j["usage"].value("prompt_tokens", int64_t{0});
    r.usage.completion_tokens = j["usage"].value("completion_tokens", int64_t{0});
  }
  r.latency = std::chrono::milliseconds(j.value("latency_ms", int64_t{0}));
  return r;
}

bool Retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

ChatRequest WithDefaults(ChatRequest req) {
  if (!req.temperature) req.temperature = kDefaultTemperature;
  if (!req.top_p) req.top_p = kDefaultTopP;
  return req;
}

std::string RequestBody(const ChatRequest& req) { return RequestJson(req).dump(); }

ScriptedGateway::ScriptedGateway(std::vector<std::string> script)
    : script_(std::move(script)) {}

ChatResponse ScriptedGateway::Complete(const ChatRequest& req) {
  std::lock_guard lock(mu_);
  requests_.push_back(WithDefaults(req));
  if (next_ >= script_.size()) throw ScriptExhausted();
  ChatResponse r;
  r.content = script_[next_++];
  r.usage.completion_tokens = static_cast<int64_t>(r.content.size() / 4);
  for (const ChatMessage& m : req.messages) {
    r.usage.prompt_tokens += static_cast<int64_t>(m.content.size() / 4);
  }
  return r;
}

void ScriptedGateway::Advance(size_t n) {
  std::lock_guard lock(mu_);
  next_ = std::min(script_.size(), next_ + n);
}

size_t ScriptedGateway::calls() const {
  std::lock_guard lock(mu_);
  return requests_.size();
}

std::vector<ChatRequest> ScriptedGateway::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::chrono::milliseconds RetryPolicy::Delay(int attempt, double unit_random) const {
  const double base = static_cast<double>(base_delay.count()) *
                      std::ldexp(1.0, std::min(attempt, 30));
  const double with_jitter = base * (1.0 + jitter * unit_random);
  const double capped = std::min(with_jitter, static_cast<double>(max_delay.count()));
  return std::chrono::milliseconds(static_cast<int64_t>(capped));
}

HttpGateway::HttpGateway(HttpGatewayConfig config) : config_(std::move(config)) {
  if (config_.retry.max_attempts < 1) {
    throw ConfigError("retry.max_attempts must be >= 1");
  }
  const char* key = config_.api_key_env.empty()
                        ? nullptr
                        : std::getenv(config_.api_key_env.c_str());
  if (key != nullptr) api_key_ = key;
  if (config_.require_api_key && api_key_.empty()) {
    throw ConfigError("API credential missing: set " + config_.api_key_env);
  }
  const size_t scheme_end = config_.endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint must be an absolute http(s) URL");
  }
  const size_t path_begin = config_.endpoint.find('/', scheme_end + 3);
  scheme_host_port_ = config_.endpoint.substr(0, path_begin);
  path_ = path_begin == std::string::npos ? "/" : config_.endpoint.substr(path_begin);
  if (!config_.sleep) {
    config_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

ChatResponse HttpGateway::Complete(const ChatRequest& req) {
  httplib::Client client(scheme_host_port_);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  client.set_connection_timeout(std::chrono::seconds(30));
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  const std::string body = RequestBody(req);

  std::mt19937_64 jitter_rng(std::random_device{}());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int last_status = 0;
  std::string last_error;
  for (int attempt = 0; attempt < config_.retry.max_attempts; ++attempt) {
    const auto start = std::chrono::steady_clock::now();
    httplib::Result res = client.Post(path_, headers, body, "application/json");
    const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    std::chrono::milliseconds delay = config_.retry.Delay(attempt, unit(jitter_rng));
    if (!res) {
      last_status = 0;
      last_error = "transport error: " + httplib::to_string(res.error());
    } else if (res->status == 200) {
      json j;
      try {
        j = json::parse(res->body);
        ChatResponse out;
        out.content = j.at("choices").at(0).at("message").at("content").get<std::string>();
        if (j.contains("usage")) {
          out.usage.prompt_tokens = j["usage"].value("prompt_tokens", int64_t{0});
          out.usage.completion_tokens = j["usage"].value("completion_tokens", int64_t{0});
        }
        out.latency = latency;
        if (out.content.empty()) throw GatewayError("empty completion content", 200);
        return out;
      } catch (const json::exception& e) {
        throw GatewayError(std::string("malformed completion body: ") + e.what(), 200);
      }
    } else {
      last_status = res->status;
      last_error = "HTTP " + std::to_string(res->status);
      if (!Retryable(res->status)) {
        throw GatewayError(last_error + ": " + res->body.substr(0, 512), last_status);
      }
      if (res->status == 429 && res->has_header("Retry-After")) {
        const std::string value = res->get_header_value("Retry-After");
        char* end = nullptr;
        const double seconds = std::strtod(value.c_str(), &end);
        if (end != value.c_str() && seconds >= 0.0) {
          delay = std::chrono::milliseconds(static_cast<int64_t>(seconds * 1000.0));
        }
      }
    }
    if (attempt + 1 < config_.retry.max_attempts) config_.sleep(delay);
  }
  throw GatewayError("chat completion failed after " +
                         std::to_string(config_.retry.max_attempts) +
                         " attempts (" + last_error + ")",
                     last_status);
}

RecordingGateway::RecordingGateway(Gateway& inner, std::filesystem::path path)
    : inner_(inner), path_(std::move(path)) {}

ChatResponse RecordingGateway::Complete(const ChatRequest& req) {
  ChatResponse resp = inner_.Complete(req);
  const json line = {{"request", RequestJson(req)}, {"response", ResponseJson(resp)}};
  std::lock_guard lock(mu_);
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  out << line.dump() << '\n';
  if (!out) throw GatewayError("cannot append to recording " + path_.string());
  return resp;
}

ReplayGateway::ReplayGateway(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open recording " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    entries_.push_back({j.at("request").dump(), ResponseFromJson(j.at("response"))});
  }
}

ChatResponse ReplayGateway::Complete(const ChatRequest& req) {
  std::lock_guard lock(mu_);
  if (next_ >= entries_.size()) {
    throw ReplayMiss("replay recording exhausted after " +
                     std::to_string(entries_.size()) + " turns");
  }
  const Entry& e = entries_[next_];
  if (e.request_body != RequestBody(req)) {
    throw ReplayMiss("request " + std::to_string(next_) +
                     " does not match the recording");
  }
  ++next_;
  return e.response;
}

void ReplayGateway::Advance(size_t n) {
  std::lock_guard lock(mu_);
  next_ = std::min(entries_.size(), next_ + n);
}

size_t CountRecordedTurns(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  size_t n = 0;
  std::string line;
  while (std::getline(in, line)) n += !line.empty();
  return n;
}

}  // namespace llamea
