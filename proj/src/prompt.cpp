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

#include "moralprobe/prompt.h"

#include <algorithm>
#include <charconv>
#include <set>

#include <fmt/format.h>

#include "moralprobe/config.h"
#include "moralprobe/csv.h"
#include "moralprobe/error.h"

namespace moralprobe {

namespace {

int parse_pair_id(std::string_view text) {
  std::string t = trim(text);
  if (t.rfind("pair", 0) == 0) t.erase(0, 4);
  int id = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), id);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || id < 1) {
    throw UsageError(fmt::format("bad pair id '{}'", text));
  }
  return id;
}

void require_nonempty(std::string_view value, std::string_view what) {
  if (value.empty()) throw DataError(fmt::format("empty {} in prompt", what));
}

}  // namespace

std::string_view mode_name(PromptMode mode) {
  return mode == PromptMode::kIn ? "in" : "people";
}

PromptMode parse_mode(std::string_view name) {
  const std::string t = trim(name);
  if (t == "in") return PromptMode::kIn;
  if (t == "people") return PromptMode::kPeople;
  throw UsageError(fmt::format("unknown prompt mode '{}'", name));
}

const std::vector<MoralTokenPair>& canonical_pairs() {
  static const std::vector<MoralTokenPair> pairs = {
      {1, "always justifiable", "never justifiable"},
      {2, "right", "wrong"},
      {3, "morally good", "morally bad"},
      {4, "ethically right", "ethically wrong"},
      {5, "ethical", "unethical"},
  };
  return pairs;
}

std::vector<MoralTokenPair> load_pairs(const std::filesystem::path& path) {
  std::vector<MoralTokenPair> pairs;
  std::set<int> ids;
  for (const auto& entry : load_config(path)) {
    const auto* items = std::get_if<std::vector<std::string>>(&entry.value);
    if (items == nullptr || items->size() != 2) {
      throw DataError(fmt::format("{}:{}: pair must be [\"positive\", \"negative\"]",
                                  path.string(), entry.line));
    }
    int id = 0;
    try {
      id = parse_pair_id(entry.key);
    } catch (const UsageError& e) {
      throw DataError(fmt::format("{}:{}: {}", path.string(), entry.line, e.what()));
    }
    MoralTokenPair pair{id, trim((*items)[0]), trim((*items)[1])};
    if (pair.positive.empty() || pair.negative.empty() ||
        pair.positive == pair.negative) {
      throw DataError(fmt::format(
          "{}:{}: pair phrases must be nonempty and distinct", path.string(),
          entry.line));
    }
    if (!ids.insert(id).second) {
      throw DataError(
          fmt::format("{}:{}: duplicate pair id {}", path.string(), entry.line, id));
    }
    pairs.push_back(std::move(pair));
  }
  if (pairs.empty()) {
    throw DataError(fmt::format("{}: no pairs declared", path.string()));
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return pairs;
}

std::vector<MoralTokenPair> select_pairs(
    std::string_view spec, const std::vector<MoralTokenPair>& available) {
  const std::string s = trim(spec);
  std::set<int> wanted;
  if (s == "all") {
    for (const auto& p : available) wanted.insert(p.id);
  } else {
    for (const auto& part : split_record(s, ',')) {
      const auto dash = part.find('-');
      if (dash == std::string::npos) {
        wanted.insert(parse_pair_id(part));
        continue;
      }
      const int lo = parse_pair_id(part.substr(0, dash));
      const int hi = parse_pair_id(part.substr(dash + 1));
      if (hi < lo) throw UsageError(fmt::format("bad pair range '{}'", part));
      for (int id = lo; id <= hi; ++id) wanted.insert(id);
    }
  }
  if (wanted.empty()) throw UsageError("no token pairs selected");
  std::vector<MoralTokenPair> out;
  for (int id : wanted) {
    const auto it = std::find_if(available.begin(), available.end(),
                                 [id](const auto& p) { return p.id == id; });
    if (it == available.end()) {
      throw UsageError(fmt::format("token pair {} is not defined", id));
    }
    out.push_back(*it);
  }
  return out;
}

std::vector<PromptMode> parse_modes(std::string_view spec) {
  std::set<PromptMode> modes;
  for (const auto& part : split_record(spec, ',')) {
    if (trim(part).empty()) continue;
    modes.insert(parse_mode(part));
  }
  if (modes.empty()) throw UsageError("no prompt modes selected");
  return {modes.begin(), modes.end()};
}

std::string render_prefix(std::string_view country, std::string_view topic,
                          PromptMode mode, const PromptStyle& style) {
  require_nonempty(country, "country");
  require_nonempty(topic, "topic");
  if (mode == PromptMode::kIn) {
    return fmt::format("In {}{} {} is ", country,
                       style.comma_after_country ? "," : "", topic);
  }
  return fmt::format("People in {} believe {} is ", country, topic);
}

std::string render_prompt(std::string_view country, std::string_view topic,
                          std::string_view judgment, PromptMode mode,
                          const PromptStyle& style) {
  require_nonempty(judgment, "judgment");
  return render_prefix(country, topic, mode, style) + std::string(judgment);
}

std::vector<ProbeCase> probe_cases(const CountryTopicMatrix& matrix,
                                   const std::vector<PromptMode>& modes,
                                   const std::vector<MoralTokenPair>& pairs,
                                   const PromptStyle& style) {
  if (matrix.empty()) throw DataError("survey matrix is empty");
  if (modes.empty()) throw UsageError("no prompt modes selected");
  if (pairs.empty()) throw UsageError("no token pairs selected");
  std::vector<PromptMode> sorted_modes(modes);
  std::sort(sorted_modes.begin(), sorted_modes.end());
  sorted_modes.erase(std::unique(sorted_modes.begin(), sorted_modes.end()),
                     sorted_modes.end());
  std::vector<MoralTokenPair> sorted_pairs(pairs);
  std::sort(sorted_pairs.begin(), sorted_pairs.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  std::vector<ProbeCase> cases;
  cases.reserve(matrix.cells.size() * sorted_modes.size() * sorted_pairs.size());
  for (const auto& [key, cell] : matrix.cells) {
    for (PromptMode mode : sorted_modes) {
      const std::string prefix = render_prefix(key.first, key.second, mode, style);
      for (const auto& pair : sorted_pairs) {
        cases.push_back({key.first, key.second, mode, pair, prefix});
      }
    }
  }
  return cases;
}

}  // namespace moralprobe
