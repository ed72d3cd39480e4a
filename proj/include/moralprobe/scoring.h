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

#ifndef MORALPROBE_SCORING_H_
#define MORALPROBE_SCORING_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "moralprobe/backend.h"
#include "moralprobe/prompt.h"
#include "moralprobe/survey.h"

namespace moralprobe {

struct ScoringOptions {
  // Score only the first token of each judgment phrase.
  bool first_token_only = false;
  // Record failed cases as absent instead of aborting.
  bool skip_failures = false;
  // Upper bound on concurrent backend requests.
  int max_in_flight = 8;
};

struct PairScore {
  ProbeCase probe;
  double moral_logprob = 0.0;
  double nonmoral_logprob = 0.0;
  double score = 0.0;  // moral_logprob - nonmoral_logprob
};

enum class FailureKind { kNone, kData, kBackend, kOther };

struct CaseOutcome {
  std::optional<PairScore> score;
  FailureKind failure = FailureKind::kNone;
  std::string error;
};

PairScore pair_score(const ProbeCase& probe, const LogprobBackend& backend,
                     const ScoringOptions& options = {});

// Scores every case, at most `max_in_flight` at a time. Outcomes line up with
// `cases` whatever order requests complete in. Unless skip_failures is set,
// the first failing case (in case order) is rethrown with the case named.
std::vector<CaseOutcome> score_cases(const std::vector<ProbeCase>& cases,
                                     const LogprobBackend& backend,
                                     const ScoringOptions& options = {});

// One request at a time, in order. Reference path for tests and benchmarks.
std::vector<CaseOutcome> score_cases_serial(const std::vector<ProbeCase>& cases,
                                            const LogprobBackend& backend,
                                            const ScoringOptions& options = {});

// A single pair id, or the mean over all pairs.
struct PairSelector {
  static PairSelector average() { return {0}; }
  static PairSelector pair(int id) { return {id}; }

  bool is_average() const { return pair_id == 0; }
  std::string label() const;  // "pair3" or "avg"
  static PairSelector parse(std::string_view label);

  int pair_id = 0;
  friend bool operator==(const PairSelector&, const PairSelector&) = default;
};

struct ScoreCell {
  // Absent for AVERAGE matrices.
  std::optional<double> moral_logprob;
  std::optional<double> nonmoral_logprob;
  double score = 0.0;
};

// Raw (unnormalized) model scores for one mode and pair selector.
struct MoralScoreMatrix {
  PromptMode mode = PromptMode::kIn;
  PairSelector selector;
  BackendDescriptor provenance;
  std::map<CellKey, ScoreCell> cells;
};

// Builds one matrix from already scored pairs of a single mode. AVERAGE cells
// are the mean of whichever pair scores exist for the cell, in pair id order.
MoralScoreMatrix build_matrix(const std::vector<PairScore>& scores,
                              PromptMode mode, PairSelector selector,
                              const BackendDescriptor& provenance);

// Scores `cases` (all of one mode) and builds the selected matrix.
MoralScoreMatrix score_matrix(const std::vector<ProbeCase>& cases,
                              const LogprobBackend& backend,
                              PairSelector selector,
                              const ScoringOptions& options = {});

// Every per-pair matrix plus the AVERAGE for each mode present in `cases`,
// ordered by mode then selector (pairs ascending, AVERAGE last).
std::vector<MoralScoreMatrix> score_all(const std::vector<ProbeCase>& cases,
                                        const LogprobBackend& backend,
                                        const ScoringOptions& options = {});

// "scores_{mode}_{pair}.csv"
std::string scores_file_name(PromptMode mode, PairSelector selector);

// Pair files: country,topic,moral_logprob,nonmoral_logprob,score.
// AVERAGE files: country,topic,score. Six decimals, sorted rows.
std::string format_scores(const MoralScoreMatrix& matrix);
std::filesystem::path write_scores(const std::filesystem::path& directory,
                                   const MoralScoreMatrix& matrix);

// Mode and selector are recovered from the file name.
MoralScoreMatrix read_scores(const std::filesystem::path& path);

}  // namespace moralprobe

#endif  // MORALPROBE_SCORING_H_
