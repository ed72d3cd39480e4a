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

#include <array>
#include <cctype>
#include <cmath>
#include <memory>
#include <stdexcept>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "moralprobe/backend.h"
#include "moralprobe/error.h"

namespace moralprobe {

namespace {

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

}  // namespace

void BackendDescriptor::validate() const {
  if (kind == BackendKind::kRemote &&
      (!endpoint || endpoint->empty() || !model_id || model_id->empty())) {
    throw std::invalid_argument("remote backend needs an endpoint and a model id");
  }
}

std::string strip_prompt(std::string_view prompt) {
  size_t end = prompt.size();
  while (end > 0 && std::isspace(static_cast<unsigned char>(prompt[end - 1]))) {
    --end;
  }
  return std::string(prompt.substr(0, end));
}

double ReferenceBackend::token_logprob(std::string_view context,
                                       std::string_view token) const {
  const std::string message =
      fmt::format("{}\x1f{}\x1f{}", seed_, context, token);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(message.data(), message.size(), digest.data(), &length,
                 EVP_sha256(), nullptr) != 1) {
    throw BackendError("SHA-256 failed");
  }
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits = (bits << 8) | digest[static_cast<size_t>(i)];
  const double u = std::ldexp(static_cast<double>(bits), -64);
  return -0.1 - 9.9 * u;
}

ContinuationScore ReferenceBackend::continuation_logprob(
    std::string_view prompt, std::string_view continuation) const {
  std::string context = strip_prompt(prompt);
  if (context.empty()) throw DataError("empty prompt");
  const auto words = split_words(continuation);
  if (words.empty()) throw DataError("empty continuation");
  ContinuationScore score;
  for (const auto& word : words) {
    std::string token = " " + word;
    const double lp = token_logprob(context, token);
    score.total_logprob += lp;
    context += token;
    score.tokens.push_back({std::move(token), lp});
  }
  return score;
}

BackendDescriptor ReferenceBackend::descriptor() const {
  return {fmt::format("reference-seed-{}", seed_), BackendKind::kReference,
          std::nullopt, std::nullopt};
}

std::unique_ptr<LogprobBackend> reference_backend(std::uint64_t seed) {
  return std::make_unique<ReferenceBackend>(seed);
}

}  // namespace moralprobe
