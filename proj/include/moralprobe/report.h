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

#ifndef MORALPROBE_REPORT_H_
#define MORALPROBE_REPORT_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "moralprobe/prompt.h"
#include "moralprobe/scoring.h"
#include "moralprobe/stats.h"

namespace moralprobe {

// One correlation computed by `analyze`: a model's score matrix for one
// (pair selector, mode) against one survey dataset.
struct AnalysisRecord {
  std::string model;
  std::string dataset;
  PairSelector tokens;
  PromptMode mode = PromptMode::kIn;
  std::string normalization;  // "minmax", "zscore" or "none"
  CorrelationResult result;
};

// model,dataset,tokens,mode,method,normalization,r,n,p,stars with r and p at
// full precision.
std::string format_results(const std::vector<AnalysisRecord>& records);
std::vector<AnalysisRecord> read_results(const std::filesystem::path& path);

struct CorrelationTableRow {
  std::string model;
  PairSelector tokens;
  PromptMode mode = PromptMode::kIn;
  double r = 0.0;  // full precision; only the display is rounded
  std::string stars;
  size_t n = 0;
};

enum class TableFormat { kCsv, kMarkdown };

// Two decimals, never "-0.00".
std::string format_r(double r);

// Rows sorted by (model, pair id with AVG last, mode). CSV columns are
// Model,Tokens,Mode,r,p-value; the Markdown table adds n. Throws DataError on
// an empty row list.
std::string format_correlation_table(std::vector<CorrelationTableRow> rows,
                                     TableFormat format);

void emit_correlation_table(const std::filesystem::path& path,
                            const std::vector<CorrelationTableRow>& rows,
                            TableFormat format);

// Tukey boxplot: quartiles by linear interpolation between order statistics,
// whiskers at the most extreme values inside [q1 - 1.5 IQR, q3 + 1.5 IQR].
struct BoxplotSummary {
  std::string topic;
  size_t n = 0;
  double min = 0.0;  // lower whisker end
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;  // upper whisker end
  std::vector<double> outliers;
};

// Linear interpolation at position q (n - 1) of the sorted values.
double quantile(std::span<const double> sorted, double q);

BoxplotSummary boxplot_summary(std::string topic, std::span<const double> values);

std::vector<BoxplotSummary> boxplots_by_topic(
    const std::map<std::string, std::vector<double>>& values_by_topic);

std::string format_boxplots(const std::vector<BoxplotSummary>& boxes);

struct HistogramData {
  std::vector<double> bin_edges;
  std::vector<size_t> counts;
};

inline constexpr size_t kDefaultHistogramBins = 20;

// Equal-width bins over [lo, hi]; bins are right-open except the last.
// Values outside [lo, hi] throw DataError.
HistogramData histogram(std::span<const double> values, size_t bin_count,
                        double lo = -1.0, double hi = 1.0);

std::string format_histogram(const HistogramData& data);

}  // namespace moralprobe

#endif  // MORALPROBE_REPORT_H_
