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

#ifndef MORALPROBE_SURVEY_H_
#define MORALPROBE_SURVEY_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "moralprobe/csv.h"

namespace moralprobe {

// (country, topic)
using CellKey = std::pair<std::string, std::string>;

using CountryMap = std::map<std::int64_t, std::string>;

// Question id (e.g. "Q185") -> topic phrase used in prompts.
using TopicPhraseMap = std::map<std::string, std::string>;

// Survey responses reduced to the country key plus the declared question
// columns, in the order the topic map lists them.
struct RawSurveyTable {
  std::vector<std::string> questions;
  std::vector<std::string> country_keys;
  std::vector<std::vector<std::string>> answers;  // [row][question]
};

struct SurveyCell {
  double score = 0.0;
  std::int64_t count = 0;
};

// Mean moral score per (country, topic) in [-1, 1]. Cells without any
// contributing response are simply not stored.
struct CountryTopicMatrix {
  std::map<CellKey, SurveyCell> cells;

  std::vector<std::string> countries() const;
  std::vector<std::string> topics() const;
  const SurveyCell* find(const std::string& country,
                         const std::string& topic) const;
  bool empty() const { return cells.empty(); }
};

inline constexpr std::string_view kWvsCountryColumn = "B_COUNTRY";
inline constexpr std::string_view kPewCountryColumn = "COUNTRY";

struct WvsOptions {
  // Count the sentinel codes -1, -2, -4, -5 as literal zeros.
  bool missing_as_zero = false;
};

struct PewOptions {
  // Literal coding: non-responses and 'Morally unacceptable' both become -1.
  bool literal = false;
};

// Two columns (code, name). A first line whose code is not an integer is
// taken as a header. Duplicate codes and malformed rows throw DataError.
CountryMap load_country_map(const std::filesystem::path& path);

// Every key of the config file is a question id, every value its phrase.
TopicPhraseMap load_topic_map(const std::filesystem::path& path);

// Keeps only the country column and the questions of `topics`. Missing
// columns throw DataError.
RawSurveyTable select_survey_columns(const DelimitedTable& table,
                                     std::string_view country_column,
                                     const TopicPhraseMap& topics);

std::optional<int> clean_wvs_response(std::int64_t code);

// Maps a mean on the 1..10 justifiability scale onto [-1, 1].
double normalize_wvs_mean(double mean);

std::optional<int> encode_pew_response(std::string_view label,
                                       const PewOptions& options = {});

CountryTopicMatrix preprocess_wvs(const RawSurveyTable& raw,
                                  const CountryMap& map,
                                  const WvsOptions& options = {});

CountryTopicMatrix preprocess_pew(const RawSurveyTable& raw,
                                  const PewOptions& options = {});

// Half-away-from-zero at four decimals; never returns -0.
double round4(double value);

// `country,topic,score,count`, rows sorted, scores with four decimals.
std::string format_matrix(const CountryTopicMatrix& matrix);
void write_matrix(const std::filesystem::path& path,
                  const CountryTopicMatrix& matrix);
CountryTopicMatrix read_matrix(const std::filesystem::path& path);

}  // namespace moralprobe

#endif  // MORALPROBE_SURVEY_H_
