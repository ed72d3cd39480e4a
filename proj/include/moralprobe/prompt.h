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

#ifndef MORALPROBE_PROMPT_H_
#define MORALPROBE_PROMPT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "moralprobe/survey.h"

namespace moralprobe {

enum class PromptMode { kIn, kPeople };

std::string_view mode_name(PromptMode mode);  // "in" / "people"
PromptMode parse_mode(std::string_view name);

// An ordered (positive judgment, negative judgment) phrase pair.
struct MoralTokenPair {
  int id = 0;
  std::string positive;
  std::string negative;

  // The same pair with its phrases swapped.
  MoralTokenPair inverted() const { return {id, negative, positive}; }
  std::string label() const { return "pair" + std::to_string(id); }

  friend bool operator==(const MoralTokenPair&, const MoralTokenPair&) = default;
};

// pair1 (always justifiable, never justifiable), pair2 (right, wrong),
// pair3 (morally good, morally bad), pair4 (ethically right, ethically
// wrong), pair5 (ethical, unethical).
const std::vector<MoralTokenPair>& canonical_pairs();

// Config file with entries like `pair1 = ["right", "wrong"]` or
// `1 = ["right", "wrong"]`. Ids must be unique positive integers.
std::vector<MoralTokenPair> load_pairs(const std::filesystem::path& path);

// Selects pairs from `available` by a spec such as "1,4,5", "1-5" or "all".
std::vector<MoralTokenPair> select_pairs(
    std::string_view spec, const std::vector<MoralTokenPair>& available);

// "in,people" -> {kIn, kPeople}; duplicates are dropped, order normalized.
std::vector<PromptMode> parse_modes(std::string_view spec);

struct PromptStyle {
  // Put a comma after the country in IN mode ("In China, ...").
  bool comma_after_country = true;
};

// Full sentence for one judgment, without trailing punctuation.
std::string render_prompt(std::string_view country, std::string_view topic,
                          std::string_view judgment, PromptMode mode,
                          const PromptStyle& style = {});

// The sentence up to and including "is ".
std::string render_prefix(std::string_view country, std::string_view topic,
                          PromptMode mode, const PromptStyle& style = {});

struct ProbeCase {
  std::string country;
  std::string topic;
  PromptMode mode = PromptMode::kIn;
  MoralTokenPair pair;
  std::string prefix;

  friend bool operator==(const ProbeCase&, const ProbeCase&) = default;
};

// Every (present cell, mode, pair) combination, ordered by country, topic,
// mode, pair id.
std::vector<ProbeCase> probe_cases(const CountryTopicMatrix& matrix,
                                   const std::vector<PromptMode>& modes,
                                   const std::vector<MoralTokenPair>& pairs,
                                   const PromptStyle& style = {});

}  // namespace moralprobe

#endif  // MORALPROBE_PROMPT_H_
