// Copyright 2026 The moralprobe Authors. All Rights Reserved.
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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "moralprobe/backend.h"
#include "moralprobe/error.h"

namespace moralprobe {

using nlohmann::json;

namespace {

constexpr double kTotalTolerance = 1e-6;

bool retryable(int status) { return status == 503 || status == 502 || status == 504; }

std::string excerpt(const std::string& body) {
  constexpr size_t kMax = 200;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

}  // namespace

std::optional<std::string> backend_url_from_env() {
  const char* value = std::getenv("MORALPROBE_BACKEND_URL");
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string(value);
}

RemoteBackend::RemoteBackend(RemoteOptions options) : options_(std::move(options)) {
  descriptor().validate();
  const auto scheme = options_.endpoint.find("://");
  if (scheme == std::string::npos) {
    throw std::invalid_argument(
        fmt::format("backend URL '{}' lacks a scheme", options_.endpoint));
  }
  const auto path = options_.endpoint.find('/', scheme + 3);
  scheme_host_port_ = options_.endpoint.substr(0, path);
  if (path != std::string::npos) {
    base_path_ = options_.endpoint.substr(path);
    while (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
  }
  if (options_.max_attempts < 1) options_.max_attempts = 1;
}

BackendDescriptor RemoteBackend::descriptor() const {
  return {options_.model, BackendKind::kRemote, options_.endpoint, options_.model};
}

RemoteBackend::Response RemoteBackend::send(const std::string& method,
                                            const std::string& path,
                                            const std::string& body) const {
  const std::string target = base_path_ + path;
  auto backoff = options_.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    // httplib::Client is not shareable across threads; one per request.
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    auto result = method == "POST"
                      ? client.Post(target, body, "application/json")
                      : client.Get(target);
    if (result && !retryable(result->status)) {
      return {result->status, result->body};
    }
    last_error = result ? fmt::format("HTTP {}: {}", result->status,
                                      excerpt(result->body))
                        : httplib::to_string(result.error());
    if (attempt < options_.max_attempts) {
      std::this_thread::sleep_for(backoff);
      backoff = std::min(backoff * 2, options_.max_backoff);
    }
  }
  throw BackendError(fmt::format("{} {}{} failed after {} attempt(s): {}", method,
                                 scheme_host_port_, target, options_.max_attempts,
                                 last_error));
}

ContinuationScore RemoteBackend::continuation_logprob(
    std::string_view prompt, std::string_view continuation) const {
  const std::string stripped = strip_prompt(prompt);
  if (stripped.empty()) throw DataError("empty prompt");
  if (continuation.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw DataError("empty continuation");
  }
  const json request = {{"model", options_.model},
                        {"prompt", stripped},
                        {"continuation", std::string(continuation)}};
  const auto response = send("POST", "/v1/logprob", request.dump());
  switch (response.status) {
    case 200:
      break;
    case 400:
      throw BackendError(fmt::format("model rejected input: {}", excerpt(response.body)));
    case 404:
      throw BackendError(fmt::format("unknown model '{}'", options_.model));
    default:
      throw BackendError(fmt::format("unexpected HTTP {}: {}", response.status,
                                     excerpt(response.body)));
  }

  ContinuationScore score;
  try {
    const json body = json::parse(response.body);
    const auto& tokens = body.at("tokens");
    if (!tokens.is_array() || tokens.empty()) {
      throw BackendError("response has no tokens");
    }
    double sum = 0.0;
    for (const auto& token : tokens) {
      TokenLogprob entry{token.at("text").get<std::string>(),
                         token.at("logprob").get<double>()};
      if (!std::isfinite(entry.logprob) || entry.logprob > 0.0) {
        throw BackendError(fmt::format("invalid logprob {}", entry.logprob));
      }
      sum += entry.logprob;
      score.tokens.push_back(std::move(entry));
    }
    const double total = body.at("total_logprob").get<double>();
    if (!std::isfinite(total) || std::abs(total - sum) > kTotalTolerance) {
      throw BackendError(fmt::format(
          "total_logprob {} disagrees with token sum {}", total, sum));
    }
    score.total_logprob = sum;
  } catch (const json::exception& e) {
    throw BackendError(fmt::format("malformed logprob response: {}", e.what()));
  }
  return score;
}

std::vector<std::string> RemoteBackend::list_models() const {
  const auto response = send("GET", "/v1/models", "");
  if (response.status != 200) {
    throw BackendError(fmt::format("GET /v1/models returned HTTP {}", response.status));
  }
  try {
    return json::parse(response.body).at("models").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw BackendError(fmt::format("malformed models response: {}", e.what()));
  }
}

bool RemoteBackend::healthy() const {
  try {
    const auto response = send("GET", "/v1/health", "");
    if (response.status != 200) return false;
    return json::parse(response.body).value("status", "") == "ok";
  } catch (const BackendError&) {
    return false;
  } catch (const json::exception&) {
    return false;
  }
}

}  // namespace moralprobe
