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

#ifndef MORALPROBE_BACKEND_H_
#define MORALPROBE_BACKEND_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace moralprobe {

struct TokenLogprob {
  std::string text;
  double logprob = 0.0;  // natural log, <= 0
};

// Chain-rule score of a continuation: token i is conditioned on the prompt
// plus tokens 0..i-1, and `total_logprob` is the sum over tokens.
struct ContinuationScore {
  std::vector<TokenLogprob> tokens;
  double total_logprob = 0.0;
};

enum class BackendKind { kReference, kRemote };

struct BackendDescriptor {
  std::string name;
  BackendKind kind = BackendKind::kReference;
  std::optional<std::string> endpoint;
  std::optional<std::string> model_id;

  // Throws std::invalid_argument when a remote descriptor lacks its endpoint
  // or model id.
  void validate() const;
};

// A source of continuation log-probabilities. Implementations must be safe to
// call from several threads at once.
//
// The prompt is the rendered prefix; trailing whitespace is stripped and the
// continuation is joined to it with a single space. Tokenization belongs to
// the backend.
class LogprobBackend {
 public:
  virtual ~LogprobBackend() = default;

  // Throws DataError for an empty prompt or continuation and BackendError
  // when the model cannot produce a score.
  virtual ContinuationScore continuation_logprob(
      std::string_view prompt, std::string_view continuation) const = 0;

  virtual BackendDescriptor descriptor() const = 0;
};

// Deterministic stand-in for a language model. Each whitespace-separated word
// of the continuation is one token (with a leading space), and its logprob is
// a pure function of (seed, context, token) drawn from SHA-256:
//
//   u = big-endian uint64 of SHA256("{seed}\x1f{context}\x1f{token}")[0:8] / 2^64
//   logprob = -0.1 - 9.9 * u            (always within [-10, -0.1])
//
// where context is the stripped prompt followed by the preceding tokens.
class ReferenceBackend final : public LogprobBackend {
 public:
  explicit ReferenceBackend(std::uint64_t seed) : seed_(seed) {}

  ContinuationScore continuation_logprob(
      std::string_view prompt, std::string_view continuation) const override;
  BackendDescriptor descriptor() const override;

  double token_logprob(std::string_view context, std::string_view token) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

std::unique_ptr<LogprobBackend> reference_backend(std::uint64_t seed);

struct RemoteOptions {
  std::string endpoint;  // e.g. http://127.0.0.1:8000 (optional path prefix)
  std::string model;
  int max_attempts = 5;  // per request; 503 and connection failures retry
  std::chrono::milliseconds initial_backoff{250};
  std::chrono::milliseconds max_backoff{8000};
  std::chrono::seconds timeout{120};
};

// Client for the sidecar wire protocol:
//   POST {endpoint}/v1/logprob  {"model","prompt","continuation"}
//   GET  {endpoint}/v1/models, GET {endpoint}/v1/health
class RemoteBackend final : public LogprobBackend {
 public:
  explicit RemoteBackend(RemoteOptions options);

  ContinuationScore continuation_logprob(
      std::string_view prompt, std::string_view continuation) const override;
  BackendDescriptor descriptor() const override;

  std::vector<std::string> list_models() const;
  bool healthy() const;

 private:
  struct Response {
    int status = 0;
    std::string body;
  };
  Response send(const std::string& method, const std::string& path,
                const std::string& body) const;

  RemoteOptions options_;
  std::string scheme_host_port_;
  std::string base_path_;
};

// Value of MORALPROBE_BACKEND_URL, if set and nonempty.
std::optional<std::string> backend_url_from_env();

// Drops trailing whitespace; both backends join on exactly one space.
std::string strip_prompt(std::string_view prompt);

}  // namespace moralprobe

#endif  // MORALPROBE_BACKEND_H_
