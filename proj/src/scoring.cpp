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

#include "moralprobe/scoring.h"

#include <algorithm>
#include <charconv>
#include <regex>
#include <set>

#include <fmt/format.h>

#include "moralprobe/csv.h"
#include "moralprobe/error.h"

namespace moralprobe {

namespace {

double phrase_logprob(const LogprobBackend& backend, const std::string& prefix,
                      const std::string& phrase, bool first_token_only) {
  const auto result = backend.continuation_logprob(prefix, phrase);
  if (result.tokens.empty()) throw BackendError("backend returned no tokens");
  return first_token_only ? result.tokens.front().logprob : result.total_logprob;
}

CaseOutcome score_one(const ProbeCase& probe, const LogprobBackend& backend,
                      const ScoringOptions& options) {
  CaseOutcome outcome;
  try {
    outcome.score = pair_score(probe, backend, options);
  } catch (const DataError& e) {
    outcome.failure = FailureKind::kData;
    outcome.error = e.what();
  } catch (const BackendError& e) {
    outcome.failure = FailureKind::kBackend;
    outcome.error = e.what();
  } catch (const std::exception& e) {
    outcome.failure = FailureKind::kOther;
    outcome.error = e.what();
  }
  return outcome;
}

void raise_first_failure(const std::vector<ProbeCase>& cases,
                         const std::vector<CaseOutcome>& outcomes) {
  for (size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (o.failure == FailureKind::kNone) continue;
    const auto& c = cases[i];
    const std::string message =
        fmt::format("probe ({}, {}, {}, {}) failed: {}", c.country, c.topic,
                    mode_name(c.mode), c.pair.label(), o.error);
    if (o.failure == FailureKind::kData) throw DataError(message);
    throw BackendError(message);
  }
}

std::string fixed6(double value) {
  std::string s = fmt::format("{:.6f}", value);
  if (s == "-0.000000") s.erase(0, 1);
  return s;
}

double parse_double(const std::string& text, const std::filesystem::path& path) {
  try {
    size_t used = 0;
    const std::string t = trim(text);
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw DataError(fmt::format("{}: bad number '{}'", path.string(), text));
  }
}

}  // namespace

PairScore pair_score(const ProbeCase& probe, const LogprobBackend& backend,
                     const ScoringOptions& options) {
  PairScore result;
  result.probe = probe;
  result.moral_logprob = phrase_logprob(backend, probe.prefix, probe.pair.positive,
                                        options.first_token_only);
  result.nonmoral_logprob = phrase_logprob(
      backend, probe.prefix, probe.pair.negative, options.first_token_only);
  result.score = result.moral_logprob - result.nonmoral_logprob;
  return result;
}

std::vector<CaseOutcome> score_cases(const std::vector<ProbeCase>& cases,
                                     const LogprobBackend& backend,
                                     const ScoringOptions& options) {
  std::vector<CaseOutcome> outcomes(cases.size());
  const int threads = std::max(1, options.max_in_flight);
  const auto n = static_cast<std::ptrdiff_t>(cases.size());
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    outcomes[static_cast<size_t>(i)] =
        score_one(cases[static_cast<size_t>(i)], backend, options);
  }
  if (!options.skip_failures) raise_first_failure(cases, outcomes);
  return outcomes;
}

std::vector<CaseOutcome> score_cases_serial(const std::vector<ProbeCase>& cases,
                                            const LogprobBackend& backend,
                                            const ScoringOptions& options) {
  std::vector<CaseOutcome> outcomes;
  outcomes.reserve(cases.size());
  for (const auto& probe : cases) {
    outcomes.push_back(score_one(probe, backend, options));
  }
  if (!options.skip_failures) raise_first_failure(cases, outcomes);
  return outcomes;
}

std::string PairSelector::label() const {
  return is_average() ? "avg" : fmt::format("pair{}", pair_id);
}

PairSelector PairSelector::parse(std::string_view label) {
  if (label == "avg") return average();
  if (label.substr(0, 4) == "pair") {
    int id = 0;
    const auto digits = label.substr(4);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
    if (!digits.empty() && ec == std::errc() &&
        ptr == digits.data() + digits.size() && id > 0) {
      return pair(id);
    }
  }
  throw DataError(fmt::format("bad pair selector '{}'", label));
}

MoralScoreMatrix build_matrix(const std::vector<PairScore>& scores,
                              PromptMode mode, PairSelector selector,
                              const BackendDescriptor& provenance) {
  MoralScoreMatrix matrix{mode, selector, provenance, {}};
  if (!selector.is_average()) {
    for (const auto& s : scores) {
      if (s.probe.mode != mode) {
        throw std::invalid_argument("pair scores span several prompt modes");
      }
      if (s.probe.pair.id != selector.pair_id) continue;
      const bool inserted =
          matrix.cells
              .emplace(CellKey{s.probe.country, s.probe.topic},
                       ScoreCell{s.moral_logprob, s.nonmoral_logprob, s.score})
              .second;
      if (!inserted) throw std::invalid_argument("duplicate probe case");
    }
    return matrix;
  }

  std::map<CellKey, std::map<int, double>> by_cell;
  for (const auto& s : scores) {
    if (s.probe.mode != mode) {
      throw std::invalid_argument("pair scores span several prompt modes");
    }
    if (!by_cell[{s.probe.country, s.probe.topic}].emplace(s.probe.pair.id, s.score).second) {
      throw std::invalid_argument("duplicate probe case");
    }
  }
  for (const auto& [key, per_pair] : by_cell) {
    double sum = 0.0;
    for (const auto& [id, score] : per_pair) sum += score;
    matrix.cells.emplace(
        key, ScoreCell{std::nullopt, std::nullopt,
                       sum / static_cast<double>(per_pair.size())});
  }
  return matrix;
}

MoralScoreMatrix score_matrix(const std::vector<ProbeCase>& cases,
                              const LogprobBackend& backend,
                              PairSelector selector,
                              const ScoringOptions& options) {
  if (cases.empty()) throw DataError("no probe cases to score");
  const PromptMode mode = cases.front().mode;
  std::vector<ProbeCase> slice;
  for (const auto& c : cases) {
    if (c.mode != mode) {
      throw std::invalid_argument("score_matrix needs cases of a single mode");
    }
    if (selector.is_average() || c.pair.id == selector.pair_id) slice.push_back(c);
  }
  const auto outcomes = score_cases(slice, backend, options);
  std::vector<PairScore> scores;
  for (const auto& o : outcomes) {
    if (o.score) scores.push_back(*o.score);
  }
  return build_matrix(scores, mode, selector, backend.descriptor());
}

std::vector<MoralScoreMatrix> score_all(const std::vector<ProbeCase>& cases,
                                        const LogprobBackend& backend,
                                        const ScoringOptions& options) {
  const auto outcomes = score_cases(cases, backend, options);
  std::map<PromptMode, std::vector<PairScore>> by_mode;
  std::map<PromptMode, std::set<int>> pair_ids;
  for (size_t i = 0; i < cases.size(); ++i) {
    pair_ids[cases[i].mode].insert(cases[i].pair.id);
    if (outcomes[i].score) by_mode[cases[i].mode].push_back(*outcomes[i].score);
  }
  const auto provenance = backend.descriptor();
  std::vector<MoralScoreMatrix> matrices;
  for (const auto& [mode, ids] : pair_ids) {
    const auto& scores = by_mode[mode];
    for (int id : ids) {
      matrices.push_back(build_matrix(scores, mode, PairSelector::pair(id), provenance));
    }
    matrices.push_back(build_matrix(scores, mode, PairSelector::average(), provenance));
  }
  return matrices;
}

std::string scores_file_name(PromptMode mode, PairSelector selector) {
  return fmt::format("scores_{}_{}.csv", mode_name(mode), selector.label());
}

std::string format_scores(const MoralScoreMatrix& matrix) {
  const bool average = matrix.selector.is_average();
  std::string out = average ? "country,topic,score\n"
                            : "country,topic,moral_logprob,nonmoral_logprob,score\n";
  for (const auto& [key, cell] : matrix.cells) {
    std::vector<std::string> fields = {key.first, key.second};
    if (!average) {
      fields.push_back(fixed6(cell.moral_logprob.value_or(0.0)));
      fields.push_back(fixed6(cell.nonmoral_logprob.value_or(0.0)));
    }
    fields.push_back(fixed6(cell.score));
    out += join_record(fields);
    out.push_back('\n');
  }
  return out;
}

std::filesystem::path write_scores(const std::filesystem::path& directory,
                                   const MoralScoreMatrix& matrix) {
  const auto path = directory / scores_file_name(matrix.mode, matrix.selector);
  write_text_file(path, format_scores(matrix));
  return path;
}

MoralScoreMatrix read_scores(const std::filesystem::path& path) {
  static const std::regex kName(R"(scores_(in|people)_(avg|pair[0-9]+)\.csv)");
  std::smatch match;
  const std::string name = path.filename().string();
  if (!std::regex_match(name, match, kName)) {
    throw DataError(fmt::format(
        "'{}' is not named scores_{{mode}}_{{pair}}.csv", path.string()));
  }
  MoralScoreMatrix matrix;
  matrix.mode = parse_mode(match[1].str());
  matrix.selector = PairSelector::parse(match[2].str());

  const auto table = read_delimited(path);
  const int c = table.column("country");
  const int t = table.column("topic");
  const int s = table.column("score");
  const int m = table.column("moral_logprob");
  const int nm = table.column("nonmoral_logprob");
  if (c < 0 || t < 0 || s < 0) {
    throw DataError(fmt::format("{}: expected country,topic,...,score columns",
                                path.string()));
  }
  for (const auto& row : table.rows) {
    ScoreCell cell;
    cell.score = parse_double(row[static_cast<size_t>(s)], path);
    if (m >= 0) cell.moral_logprob = parse_double(row[static_cast<size_t>(m)], path);
    if (nm >= 0) {
      cell.nonmoral_logprob = parse_double(row[static_cast<size_t>(nm)], path);
    }
    if (!matrix.cells
             .emplace(CellKey{row[static_cast<size_t>(c)], row[static_cast<size_t>(t)]},
                      cell)
             .second) {
      throw DataError(fmt::format("{}: duplicate cell ({}, {})", path.string(),
                                  row[static_cast<size_t>(c)],
                                  row[static_cast<size_t>(t)]));
    }
  }
  return matrix;
}

}  // namespace moralprobe
