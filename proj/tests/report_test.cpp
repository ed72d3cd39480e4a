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
#include <random>

#include "gtest/gtest.h"
#include "moralprobe/error.h"
#include "test_util.h"

namespace moralprobe {
namespace {

using testing::read_file;
using testing::TempDir;
using testing::write_file;

CorrelationTableRow row(std::string model, PairSelector tokens, PromptMode mode, double r,
                        std::string stars, size_t n = 50) {
  return {std::move(model), tokens, mode, r, std::move(stars), n};
}

TEST(CorrelationTable, CsvRow) {
  const auto csv = format_correlation_table(
      {row("GPT-2", PairSelector::pair(1), PromptMode::kIn, -0.3912, "***")}, TableFormat::kCsv);
  EXPECT_EQ(csv, "Model,Tokens,Mode,r,p-value\nGPT-2,pair1,in,-0.39,***\n");
}

TEST(CorrelationTable, RoundingIsDisplayOnly) {
  EXPECT_EQ(format_r(0.799999), "0.80");
  EXPECT_EQ(format_r(-0.001), "0.00");
  EXPECT_EQ(format_r(0.005000000001), "0.01");
  EXPECT_EQ(format_r(-1.0), "-1.00");
}

TEST(CorrelationTable, SortedWithAverageLast) {
  const auto csv = format_correlation_table(
      {row("m", PairSelector::average(), PromptMode::kIn, 0.1, ""),
       row("m", PairSelector::pair(10), PromptMode::kIn, 0.2, "*"),
       row("m", PairSelector::pair(2), PromptMode::kPeople, 0.3, "**"),
       row("m", PairSelector::pair(2), PromptMode::kIn, 0.4, ""),
       row("a", PairSelector::pair(5), PromptMode::kIn, 0.5, "")},
      TableFormat::kCsv);
  EXPECT_EQ(csv,
            "Model,Tokens,Mode,r,p-value\n"
            "a,pair5,in,0.50,\n"
            "m,pair2,in,0.40,\n"
            "m,pair2,people,0.30,**\n"
            "m,pair10,in,0.20,*\n"
            "m,AVG,in,0.10,\n");
}

TEST(CorrelationTable, Markdown) {
  const auto md = format_correlation_table(
      {row("GPT-2", PairSelector::pair(1), PromptMode::kIn, -0.3912, "***", 42),
       row("GPT-2", PairSelector::average(), PromptMode::kPeople, 0.05, "", 7)},
      TableFormat::kMarkdown);
  EXPECT_EQ(md,
            "| Model | Tokens | Mode   |     r | p-value |  n |\n"
            "| ----- | ------ | ------ | ----: | ------- | -: |\n"
            "| GPT-2 | pair1  | in     | -0.39 | ***     | 42 |\n"
            "| GPT-2 | AVG    | people |  0.05 |         |  7 |\n");
}

TEST(CorrelationTable, EmptyIsAnError) {
  EXPECT_THROW(format_correlation_table({}, TableFormat::kCsv), DataError);
  EXPECT_THROW(format_correlation_table({}, TableFormat::kMarkdown), DataError);
}

// Tukey fences recomputed from the definition on a small sorted sample.
struct FenceOracle {
  double q1, q3, lo_whisker, hi_whisker;
  std::vector<double> outliers;
};

FenceOracle fence_oracle(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto at = [&](double q) {
    const double h = (v.size() - 1) * q;
    const auto i = static_cast<size_t>(h);
    return i + 1 < v.size() ? v[i] + (h - i) * (v[i + 1] - v[i]) : v[i];
  };
  FenceOracle o{at(0.25), at(0.75), 0, 0, {}};
  const double iqr = o.q3 - o.q1;
  std::vector<double> inside;
  for (double x : v) {
    if (x < o.q1 - 1.5 * iqr || x > o.q3 + 1.5 * iqr) {
      o.outliers.push_back(x);
    } else {
      inside.push_back(x);
    }
  }
  o.lo_whisker = inside.front();
  o.hi_whisker = inside.back();
  return o;
}

TEST(Boxplot, Simple) {
  const std::vector<double> v = {5, 1, 4, 2, 3};
  const auto box = boxplot_summary("t", v);
  EXPECT_EQ(box.n, 5u);
  EXPECT_EQ(box.min, 1);
  EXPECT_EQ(box.q1, 2);
  EXPECT_EQ(box.median, 3);
  EXPECT_EQ(box.q3, 4);
  EXPECT_EQ(box.max, 5);
  EXPECT_TRUE(box.outliers.empty());
}

TEST(Boxplot, OutlierMatchesFenceOracle) {
  const std::vector<double> v = {1, 2, 3, 4, 100};
  const auto box = boxplot_summary("t", v);
  const auto oracle = fence_oracle(v);
  EXPECT_EQ(box.outliers, oracle.outliers);
  EXPECT_EQ(box.outliers, std::vector<double>{100});
  EXPECT_EQ(box.max, oracle.hi_whisker);
  EXPECT_EQ(box.min, oracle.lo_whisker);
  EXPECT_EQ(box.q1, oracle.q1);
  EXPECT_EQ(box.q3, oracle.q3);
}

TEST(Boxplot, RandomSamplesMatchOracle) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(1, 40);
  std::cauchy_distribution<double> heavy(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(len(rng));
    for (auto& x : v) x = heavy(rng);
    const auto box = boxplot_summary("t", v);
    const auto oracle = fence_oracle(v);
    EXPECT_NEAR(box.q1, oracle.q1, 1e-12);
    EXPECT_NEAR(box.q3, oracle.q3, 1e-12);
    EXPECT_EQ(box.outliers.size(), oracle.outliers.size());
    EXPECT_EQ(box.max, oracle.hi_whisker);
    EXPECT_EQ(box.min, oracle.lo_whisker);
  }
}

TEST(Boxplot, SingleValueAndEmpty) {
  const std::vector<double> v = {7};
  const auto box = boxplot_summary("t", v);
  EXPECT_EQ(box.min, 7);
  EXPECT_EQ(box.q1, 7);
  EXPECT_EQ(box.median, 7);
  EXPECT_EQ(box.q3, 7);
  EXPECT_EQ(box.max, 7);
  EXPECT_THROW(boxplot_summary("t", std::vector<double>{}), DataError);
}

TEST(Boxplot, CsvLayout) {
  const auto boxes = boxplots_by_topic({{"b", {1, 2, 3, 4, 100}}, {"a", {0.5}}});
  EXPECT_EQ(format_boxplots(boxes),
            "topic,n,min,q1,median,q3,max,outliers\n"
            "a,1,0.500000,0.500000,0.500000,0.500000,0.500000,\n"
            "b,5,1.000000,2.000000,3.000000,4.000000,4.000000,100.000000\n");
}

TEST(Histogram, Endpoints) {
  const std::vector<double> v = {-1.0, 1.0};
  const auto h = histogram(v, 2);
  EXPECT_EQ(h.counts, (std::vector<size_t>{1, 1}));
  EXPECT_EQ(h.bin_edges, (std::vector<double>{-1.0, 0.0, 1.0}));
}

TEST(Histogram, ZerosLandInTheBinHoldingZero) {
  const std::vector<double> zeros(9, 0.0);
  const auto h = histogram(zeros, kDefaultHistogramBins);
  for (size_t i = 0; i < h.counts.size(); ++i) {
    const bool holds_zero = h.bin_edges[i] <= 0.0 && 0.0 < h.bin_edges[i + 1];
    EXPECT_EQ(h.counts[i], holds_zero ? 9u : 0u) << i;
  }
}

TEST(Histogram, CountsAreConservedAndBinsRespected) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (size_t bins : {1u, 3u, 7u, 20u}) {
    std::vector<double> v(500);
    for (auto& x : v) x = u(rng);
    v.push_back(1.0);
    v.push_back(-1.0);
    v.push_back(0.5);
    const auto h = histogram(v, bins);
    size_t total = 0;
    for (size_t i = 0; i < bins; ++i) {
      size_t expected = 0;
      for (double x : v) {
        const bool last = i + 1 == bins;
        if (x >= h.bin_edges[i] && (x < h.bin_edges[i + 1] || (last && x <= 1.0))) ++expected;
      }
      EXPECT_EQ(h.counts[i], expected);
      total += h.counts[i];
    }
    EXPECT_EQ(total, v.size());
  }
}

TEST(Histogram, Rejects) {
  EXPECT_THROW(histogram(std::vector<double>{1.5}, 4), DataError);
  EXPECT_THROW(histogram(std::vector<double>{}, 4), DataError);
  EXPECT_THROW(histogram(std::vector<double>{0.0}, 0), DataError);
}

TEST(Histogram, Csv) {
  const auto h = histogram(std::vector<double>{-1.0, 0.25, 1.0}, 2);
  EXPECT_EQ(format_histogram(h),
            "bin_lo,bin_hi,count\n-1.000000,0.000000,1\n0.000000,1.000000,2\n");
}

TEST(Results, RoundTrip) {
  AnalysisRecord rec;
  rec.model = "GPT-2";
  rec.dataset = "wvs";
  rec.tokens = PairSelector::pair(3);
  rec.mode = PromptMode::kPeople;
  rec.normalization = "minmax";
  rec.result = {0.1 + 0.2, 12, 1.0 / 3.0, "", CorrelationMethod::kSpearman};
  AnalysisRecord avg = rec;
  avg.tokens = PairSelector::average();
  avg.result.r = -0.98765432101234567;
  avg.result.stars = "***";

  TempDir dir;
  write_file(dir / "results.csv", format_results({rec, avg}));
  const auto back = read_results(dir / "results.csv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].result.r, rec.result.r);
  EXPECT_EQ(back[0].result.p, rec.result.p);
  EXPECT_EQ(back[0].result.method, CorrelationMethod::kSpearman);
  EXPECT_EQ(back[0].mode, PromptMode::kPeople);
  EXPECT_EQ(back[1].tokens, PairSelector::average());
  EXPECT_EQ(back[1].result.r, avg.result.r);
  EXPECT_EQ(back[1].result.stars, "***");
  EXPECT_EQ(format_results(back), read_file(dir / "results.csv"));
}

TEST(Results, MissingColumn) {
  TempDir dir;
  write_file(dir / "r.csv", "model,dataset\nm,d\n");
  EXPECT_THROW(read_results(dir / "r.csv"), DataError);
}

}  // namespace
}  // namespace moralprobe
