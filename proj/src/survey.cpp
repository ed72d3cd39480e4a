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

#include "moralprobe/survey.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "moralprobe/config.h"
#include "moralprobe/error.h"

namespace moralprobe {

namespace {

std::optional<std::int64_t> parse_int(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  std::int64_t value = 0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string lowercase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

// Replaces the typographic apostrophe so "Don’t know" matches "don't know".
std::string normalize_label(std::string_view label) {
  std::string s = trim(label);
  const std::string curly = "\xE2\x80\x99";
  for (size_t pos; (pos = s.find(curly)) != std::string::npos;) {
    s.replace(pos, curly.size(), "'");
  }
  std::string collapsed;
  bool space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t') {
      space = true;
      continue;
    }
    if (space && !collapsed.empty()) collapsed.push_back(' ');
    space = false;
    collapsed.push_back(c);
  }
  return lowercase(collapsed);
}

struct Accumulator {
  double sum = 0.0;
  std::int64_t count = 0;
};

using AccumulatorGrid = std::map<CellKey, Accumulator>;

double mean_of(const Accumulator& acc) {
  return acc.sum / static_cast<double>(acc.count);
}

}  // namespace

std::vector<std::string> CountryTopicMatrix::countries() const {
  std::set<std::string> unique;
  for (const auto& [key, cell] : cells) unique.insert(key.first);
  return {unique.begin(), unique.end()};
}

std::vector<std::string> CountryTopicMatrix::topics() const {
  std::set<std::string> unique;
  for (const auto& [key, cell] : cells) unique.insert(key.second);
  return {unique.begin(), unique.end()};
}

const SurveyCell* CountryTopicMatrix::find(const std::string& country,
                                           const std::string& topic) const {
  const auto it = cells.find({country, topic});
  return it == cells.end() ? nullptr : &it->second;
}

CountryMap load_country_map(const std::filesystem::path& path) {
  const auto table = read_delimited_headerless(path);
  CountryMap map;
  for (size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto code = row.empty() ? std::nullopt : parse_int(row[0]);
    if (i == 0 && !code && row.size() == 2) continue;  // header
    if (row.size() != 2 || !code) {
      throw DataError(
          fmt::format("{}: malformed country map row {}", path.string(), i + 1));
    }
    std::string name = trim(row[1]);
    if (name.empty()) {
      throw DataError(
          fmt::format("{}: empty country name on row {}", path.string(), i + 1));
    }
    if (!map.emplace(*code, std::move(name)).second) {
      throw DataError(
          fmt::format("{}: duplicate country code {}", path.string(), *code));
    }
  }
  return map;
}

TopicPhraseMap load_topic_map(const std::filesystem::path& path) {
  TopicPhraseMap topics;
  std::set<std::string> phrases;
  for (const auto& entry : load_config(path)) {
    const auto* phrase = std::get_if<std::string>(&entry.value);
    if (phrase == nullptr || trim(*phrase).empty()) {
      throw DataError(fmt::format("{}:{}: topic for '{}' must be a nonempty string",
                                  path.string(), entry.line, entry.key));
    }
    if (!topics.emplace(entry.key, *phrase).second) {
      throw DataError(fmt::format("{}:{}: question '{}' declared twice",
                                  path.string(), entry.line, entry.key));
    }
    if (!phrases.insert(*phrase).second) {
      throw DataError(fmt::format("{}:{}: topic phrase '{}' used twice",
                                  path.string(), entry.line, *phrase));
    }
  }
  if (topics.empty()) {
    throw DataError(fmt::format("{}: no topics declared", path.string()));
  }
  return topics;
}

RawSurveyTable select_survey_columns(const DelimitedTable& table,
                                     std::string_view country_column,
                                     const TopicPhraseMap& topics) {
  const int country_index = table.column(country_column);
  if (country_index < 0) {
    throw DataError(fmt::format("missing column '{}'", country_column));
  }
  RawSurveyTable raw;
  std::vector<int> indices;
  for (const auto& [question, phrase] : topics) {
    const int idx = table.column(question);
    if (idx < 0) throw DataError(fmt::format("missing column '{}'", question));
    raw.questions.push_back(phrase);
    indices.push_back(idx);
  }
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::string key = trim(row[static_cast<size_t>(country_index)]);
    if (key.empty()) {
      throw DataError(fmt::format("row {} has no country key", r + 2));
    }
    raw.country_keys.push_back(std::move(key));
    std::vector<std::string> answers;
    answers.reserve(indices.size());
    for (int idx : indices) answers.push_back(row[static_cast<size_t>(idx)]);
    raw.answers.push_back(std::move(answers));
  }
  return raw;
}

std::optional<int> clean_wvs_response(std::int64_t code) {
  if (code >= 1 && code <= 10) return static_cast<int>(code);
  return std::nullopt;
}

double normalize_wvs_mean(double mean) {
  if (!(mean >= 1.0 && mean <= 10.0)) {
    throw DataError(fmt::format("WVS mean {} outside [1, 10]", mean));
  }
  return (mean - 5.5) / 4.5;
}

std::optional<int> encode_pew_response(std::string_view label,
                                       const PewOptions& options) {
  const std::string s = normalize_label(label);
  if (s.empty()) return std::nullopt;
  if (s == "morally acceptable") return 1;
  if (s == "not a moral issue") return 0;
  if (s == "morally unacceptable") return -1;
  if (s == "depends on situation (volunteered)" || s == "depends on situation" ||
      s == "refused" || s == "don't know" || s == "dk/refused" ||
      s == "don't know/refused") {
    if (options.literal) return -1;
    return std::nullopt;
  }
  throw DataError(fmt::format("unrecognized PEW response '{}'", label));
}

CountryTopicMatrix preprocess_wvs(const RawSurveyTable& raw,
                                  const CountryMap& map,
                                  const WvsOptions& options) {
  AccumulatorGrid grid;
  for (size_t r = 0; r < raw.country_keys.size(); ++r) {
    const auto code = parse_int(raw.country_keys[r]);
    if (!code) {
      throw DataError(fmt::format("row {}: country code '{}' is not an integer",
                                  r + 2, raw.country_keys[r]));
    }
    const auto it = map.find(*code);
    if (it == map.end()) {
      throw DataError(fmt::format("unknown country code {}", *code));
    }
    for (size_t q = 0; q < raw.questions.size(); ++q) {
      const std::string& text = raw.answers[r][q];
      if (trim(text).empty()) continue;
      const auto value = parse_int(text);
      if (!value) {
        throw DataError(fmt::format("row {}: non-integer response '{}'", r + 2,
                                    text));
      }
      std::optional<int> rating = clean_wvs_response(*value);
      if (!rating && options.missing_as_zero &&
          (*value == -1 || *value == -2 || *value == -4 || *value == -5)) {
        rating = 0;
      }
      if (!rating) continue;
      auto& acc = grid[{it->second, raw.questions[q]}];
      acc.sum += *rating;
      ++acc.count;
    }
  }
  CountryTopicMatrix matrix;
  for (const auto& [key, acc] : grid) {
    const double mean = mean_of(acc);
    double normalized = 0.0;
    if (options.missing_as_zero) {
      normalized = std::clamp((mean - 5.5) / 4.5, -1.0, 1.0);
    } else {
      normalized = normalize_wvs_mean(mean);
    }
    matrix.cells[key] = {round4(normalized), acc.count};
  }
  return matrix;
}

CountryTopicMatrix preprocess_pew(const RawSurveyTable& raw,
                                  const PewOptions& options) {
  AccumulatorGrid grid;
  for (size_t r = 0; r < raw.country_keys.size(); ++r) {
    for (size_t q = 0; q < raw.questions.size(); ++q) {
      const auto code = encode_pew_response(raw.answers[r][q], options);
      if (!code) continue;
      auto& acc = grid[{raw.country_keys[r], raw.questions[q]}];
      acc.sum += *code;
      ++acc.count;
    }
  }
  CountryTopicMatrix matrix;
  for (const auto& [key, acc] : grid) {
    matrix.cells[key] = {round4(mean_of(acc)), acc.count};
  }
  return matrix;
}

double round4(double value) {
  const double rounded = std::round(value * 1e4) / 1e4;
  return rounded == 0.0 ? 0.0 : rounded;
}

std::string format_matrix(const CountryTopicMatrix& matrix) {
  std::string out = "country,topic,score,count\n";
  for (const auto& [key, cell] : matrix.cells) {
    out += join_record({key.first, key.second, fmt::format("{:.4f}", cell.score),
                        std::to_string(cell.count)});
    out.push_back('\n');
  }
  return out;
}

void write_matrix(const std::filesystem::path& path,
                  const CountryTopicMatrix& matrix) {
  write_text_file(path, format_matrix(matrix));
}

CountryTopicMatrix read_matrix(const std::filesystem::path& path) {
  const auto table = read_delimited(path);
  const int c = table.column("country");
  const int t = table.column("topic");
  const int s = table.column("score");
  const int n = table.column("count");
  if (c < 0 || t < 0 || s < 0) {
    throw DataError(fmt::format(
        "{}: expected columns country,topic,score[,count]", path.string()));
  }
  CountryTopicMatrix matrix;
  for (const auto& row : table.rows) {
    SurveyCell cell;
    try {
      size_t used = 0;
      const std::string score = trim(row[static_cast<size_t>(s)]);
      cell.score = std::stod(score, &used);
      if (used != score.size()) throw std::invalid_argument(score);
    } catch (const std::exception&) {
      throw DataError(fmt::format("{}: bad score '{}'", path.string(),
                                  row[static_cast<size_t>(s)]));
    }
    if (!(cell.score >= -1.0 && cell.score <= 1.0)) {
      throw DataError(fmt::format("{}: score {} outside [-1, 1]", path.string(),
                                  cell.score));
    }
    if (n >= 0) {
      const auto count = parse_int(row[static_cast<size_t>(n)]);
      if (!count || *count < 1) {
        throw DataError(fmt::format("{}: bad count '{}'", path.string(),
                                    row[static_cast<size_t>(n)]));
      }
      cell.count = *count;
    }
    CellKey key{row[static_cast<size_t>(c)], row[static_cast<size_t>(t)]};
    if (!matrix.cells.emplace(std::move(key), cell).second) {
      throw DataError(fmt::format("{}: duplicate cell ({}, {})", path.string(),
                                  row[static_cast<size_t>(c)],
                                  row[static_cast<size_t>(t)]));
    }
  }
  return matrix;
}

}  // namespace moralprobe
