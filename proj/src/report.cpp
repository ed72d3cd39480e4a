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

#include "moralprobe/report.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include <fmt/format.h>

#include "moralprobe/csv.h"
#include "moralprobe/error.h"

namespace moralprobe {

namespace {

std::string full(double v) { return fmt::format("{:.17g}", v); }

std::string fixed6(double v) {
  std::string s = fmt::format("{:.6f}", v);
  if (s == "-0.000000") s.erase(0, 1);
  return s;
}

double parse_number(const std::string& text, const std::filesystem::path& path) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw DataError(fmt::format("{}: bad number '{}'", path.string(), text));
  }
}

// AVG sorts after every numbered pair.
int selector_rank(PairSelector s) {
  return s.is_average() ? std::numeric_limits<int>::max() : s.pair_id;
}

}  // namespace

std::string format_results(const std::vector<AnalysisRecord>& records) {
  std::string out = "model,dataset,tokens,mode,method,normalization,r,n,p,stars\n";
  for (const auto& rec : records) {
    out += join_record({rec.model, rec.dataset, rec.tokens.label(),
                        std::string(mode_name(rec.mode)),
                        std::string(method_name(rec.result.method)),
                        rec.normalization, full(rec.result.r),
                        std::to_string(rec.result.n), full(rec.result.p),
                        rec.result.stars});
    out.push_back('\n');
  }
  return out;
}

std::vector<AnalysisRecord> read_results(const std::filesystem::path& path) {
  const auto table = read_delimited(path);
  const char* names[] = {"model", "dataset", "tokens", "mode", "method",
                         "normalization", "r", "n", "p", "stars"};
  std::vector<size_t> col;
  for (const char* name : names) {
    const int idx = table.column(name);
    if (idx < 0) {
      throw DataError(fmt::format("{}: missing column '{}'", path.string(), name));
    }
    col.push_back(static_cast<size_t>(idx));
  }
  std::vector<AnalysisRecord> records;
  for (const auto& row : table.rows) {
    AnalysisRecord rec;
    rec.model = row[col[0]];
    rec.dataset = row[col[1]];
    rec.tokens = PairSelector::parse(row[col[2]]);
    try {
      rec.mode = parse_mode(row[col[3]]);
      rec.result.method = parse_method(row[col[4]]);
    } catch (const UsageError& e) {
      throw DataError(fmt::format("{}: {}", path.string(), e.what()));
    }
    rec.normalization = row[col[5]];
    rec.result.r = parse_number(row[col[6]], path);
    rec.result.n = static_cast<size_t>(parse_number(row[col[7]], path));
    rec.result.p = parse_number(row[col[8]], path);
    rec.result.stars = row[col[9]];
    records.push_back(std::move(rec));
  }
  return records;
}

std::string format_r(double r) {
  std::string s = fmt::format("{:.2f}", r);
  if (s == "-0.00") s.erase(0, 1);
  return s;
}

std::string format_correlation_table(std::vector<CorrelationTableRow> rows,
                                     TableFormat format) {
  if (rows.empty()) throw DataError("no correlation results to tabulate");
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(a.model, selector_rank(a.tokens), a.mode) <
           std::make_tuple(b.model, selector_rank(b.tokens), b.mode);
  });
  const auto tokens_label = [](PairSelector s) {
    return s.is_average() ? std::string("AVG") : s.label();
  };

  std::string out;
  if (format == TableFormat::kCsv) {
    out = "Model,Tokens,Mode,r,p-value\n";
    for (const auto& row : rows) {
      out += join_record({row.model, tokens_label(row.tokens),
                          std::string(mode_name(row.mode)), format_r(row.r),
                          row.stars});
      out.push_back('\n');
    }
    return out;
  }

  std::vector<std::vector<std::string>> cells = {
      {"Model", "Tokens", "Mode", "r", "p-value", "n"}};
  for (const auto& row : rows) {
    cells.push_back({row.model, tokens_label(row.tokens),
                     std::string(mode_name(row.mode)), format_r(row.r), row.stars,
                     std::to_string(row.n)});
  }
  std::vector<size_t> width(cells.front().size(), 0);
  for (const auto& line : cells) {
    for (size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  const auto emit = [&](const std::vector<std::string>& line) {
    out += "|";
    for (size_t i = 0; i < line.size(); ++i) {
      // r and n are right-aligned.
      if (i == 3 || i == 5) {
        out += fmt::format(" {:>{}} |", line[i], width[i]);
      } else {
        out += fmt::format(" {:<{}} |", line[i], width[i]);
      }
    }
    out += "\n";
  };
  emit(cells.front());
  out += "|";
  for (size_t i = 0; i < width.size(); ++i) {
    const bool right = i == 3 || i == 5;
    out += " " + std::string(width[i] - (right ? 1 : 0), '-') + (right ? ":" : "") + " |";
  }
  out += "\n";
  for (size_t i = 1; i < cells.size(); ++i) emit(cells[i]);
  return out;
}

void emit_correlation_table(const std::filesystem::path& path,
                            const std::vector<CorrelationTableRow>& rows,
                            TableFormat format) {
  write_text_file(path, format_correlation_table(rows, format));
}

double quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DataError("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxplotSummary boxplot_summary(std::string topic, std::span<const double> values) {
  if (values.empty()) {
    throw DataError(fmt::format("boxplot for '{}' has no values", topic));
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  BoxplotSummary box;
  box.topic = std::move(topic);
  box.n = sorted.size();
  box.q1 = quantile(sorted, 0.25);
  box.median = quantile(sorted, 0.5);
  box.q3 = quantile(sorted, 0.75);
  const double iqr = box.q3 - box.q1;
  const double lower_fence = box.q1 - 1.5 * iqr;
  const double upper_fence = box.q3 + 1.5 * iqr;
  box.min = box.q1;
  box.max = box.q3;
  for (double v : sorted) {
    if (v < lower_fence || v > upper_fence) {
      box.outliers.push_back(v);
    } else {
      box.min = std::min(box.min, v);
      box.max = std::max(box.max, v);
    }
  }
  return box;
}

std::vector<BoxplotSummary> boxplots_by_topic(
    const std::map<std::string, std::vector<double>>& values_by_topic) {
  std::vector<BoxplotSummary> boxes;
  for (const auto& [topic, values] : values_by_topic) {
    boxes.push_back(boxplot_summary(topic, values));
  }
  return boxes;
}

std::string format_boxplots(const std::vector<BoxplotSummary>& boxes) {
  std::string out = "topic,n,min,q1,median,q3,max,outliers\n";
  for (const auto& box : boxes) {
    std::string outliers;
    for (size_t i = 0; i < box.outliers.size(); ++i) {
      if (i > 0) outliers += ";";
      outliers += fixed6(box.outliers[i]);
    }
    out += join_record({box.topic, std::to_string(box.n), fixed6(box.min),
                        fixed6(box.q1), fixed6(box.median), fixed6(box.q3),
                        fixed6(box.max), outliers});
    out.push_back('\n');
  }
  return out;
}

HistogramData histogram(std::span<const double> values, size_t bin_count,
                        double lo, double hi) {
  if (values.empty()) throw DataError("histogram of an empty sample");
  if (bin_count < 1) throw DataError("histogram needs at least one bin");
  if (!(hi > lo)) throw DataError("histogram range is empty");
  HistogramData data;
  const double width = (hi - lo) / static_cast<double>(bin_count);
  for (size_t i = 0; i <= bin_count; ++i) {
    data.bin_edges.push_back(i == bin_count ? hi : lo + width * static_cast<double>(i));
  }
  data.counts.assign(bin_count, 0);
  for (double v : values) {
    if (!(v >= lo && v <= hi)) {
      throw DataError(fmt::format("value {} outside histogram range [{}, {}]", v, lo, hi));
    }
    auto bin = static_cast<size_t>(std::floor((v - lo) / width));
    bin = std::min(bin, bin_count - 1);
    // Floating-point division can land one bin off near an edge.
    while (bin > 0 && v < data.bin_edges[bin]) --bin;
    while (bin + 1 < bin_count && v >= data.bin_edges[bin + 1]) ++bin;
    ++data.counts[bin];
  }
  return data;
}

std::string format_histogram(const HistogramData& data) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (size_t i = 0; i < data.counts.size(); ++i) {
    out += fmt::format("{},{},{}\n", fixed6(data.bin_edges[i]),
                       fixed6(data.bin_edges[i + 1]), data.counts[i]);
  }
  return out;
}

}  // namespace moralprobe
