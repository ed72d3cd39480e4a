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

#include "moralprobe/stats.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "moralprobe/error.h"
#include "oracles.h"

namespace moralprobe {
namespace {

using testing::covariance_pearson;
using testing::random_vector;
using testing::t_two_sided_by_quadrature;

TEST(MinMax, EndpointsAndMidpoint) {
  EXPECT_EQ(minmax_normalize(std::vector<double>{1, 3, 5}),
            (std::vector<double>{-1, 0, 1}));
  EXPECT_EQ(minmax_normalize(std::vector<double>{-2, 0, 2}),
            (std::vector<double>{-1, 0, 1}));
}

TEST(MinMax, RejectsDegenerateInput) {
  EXPECT_THROW(minmax_normalize(std::vector<double>{4, 4, 4}), DataError);
  EXPECT_THROW(minmax_normalize(std::vector<double>{4}), DataError);
}

TEST(ZScore, PopulationDivisor) {
  const auto z = zscore_normalize(std::vector<double>{1, 2, 3});
  // sqrt(3/2), from (x - 2) / sqrt(2/3).
  EXPECT_NEAR(z[0], -1.224744871391589, 1e-12);
  EXPECT_NEAR(z[1], 0.0, 1e-12);
  EXPECT_NEAR(z[2], 1.224744871391589, 1e-12);
  EXPECT_THROW(zscore_normalize(std::vector<double>{4, 4}), DataError);
}

TEST(ZScore, CentersAndScalesRandomVectors) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = random_vector(rng, 2 + rng() % 50, -100, 100);
    const auto z = zscore_normalize(v);
    double mean = 0, ss = 0;
    for (double x : z) mean += x;
    mean /= static_cast<double>(z.size());
    for (double x : z) ss += (x - mean) * (x - mean);
    EXPECT_NEAR(mean, 0.0, 1e-12);
    EXPECT_NEAR(std::sqrt(ss / static_cast<double>(z.size())), 1.0, 1e-12);
  }
}

TEST(Normalize, OutputIsPositiveAffineImageOfInput) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = random_vector(rng, 3 + rng() % 30);
    for (auto scheme : {NormalizationScheme::kMinMax, NormalizationScheme::kZScore}) {
      const auto w = normalize(v, scheme);
      // Recover w = a v + b from the first two points and check the rest.
      const double a = (w[1] - w[0]) / (v[1] - v[0]);
      const double b = w[0] - a * v[0];
      EXPECT_GT(a, 0.0);
      for (size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(w[i], a * v[i] + b, 1e-9);
    }
  }
}

TEST(Pearson, PerfectAndKnownValues) {
  EXPECT_DOUBLE_EQ(pearson_r(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}), 1.0);
  EXPECT_DOUBLE_EQ(pearson_r(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}), -1.0);
  // cov = 1.0, var = 1.25 each (population): r = 0.8.
  EXPECT_NEAR(pearson_r(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}),
              0.8, 1e-15);
}

TEST(Pearson, Errors) {
  EXPECT_THROW(pearson_r(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DataError);
  EXPECT_THROW(pearson_r(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}),
               DataError);
  EXPECT_THROW(pearson_r(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), DataError);
}

TEST(Pearson, MatchesCovarianceOracle) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t n = 3 + rng() % 98;
    const auto x = random_vector(rng, n);
    const auto y = random_vector(rng, n);
    EXPECT_NEAR(pearson_r(x, y), covariance_pearson(x, y), 1e-12);
  }
}

TEST(Pearson, AffineInvariance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  std::uniform_real_distribution<double> shift(-100.0, 100.0);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t n = 3 + rng() % 60;
    const auto x = random_vector(rng, n);
    const auto y = random_vector(rng, n);
    const double a = scale(rng);
    const double b = shift(rng);
    std::vector<double> ax(x);
    for (auto& v : ax) v = a * v + b;
    EXPECT_NEAR(pearson_r(ax, y), pearson_r(x, y), 1e-12);
  }
}

TEST(Ranks, AverageTies) {
  EXPECT_EQ(average_ranks(std::vector<double>{10, 20, 20, 5}),
            (std::vector<double>{2, 3.5, 3.5, 1}));
  EXPECT_EQ(average_ranks(std::vector<double>{7, 7, 7}), (std::vector<double>{2, 2, 2}));
}

TEST(Spearman, MonotoneAndKnownValues) {
  const std::vector<double> x = {0.5, 1.5, 2.0, 7.0, 9.0};
  std::vector<double> y;
  for (double v : x) y.push_back(std::exp(v) - 3.0);
  EXPECT_DOUBLE_EQ(spearman_r(x, y), 1.0);
  EXPECT_DOUBLE_EQ(spearman_r(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}), -1.0);
  EXPECT_NEAR(spearman_r(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}),
              0.8, 1e-15);
}

TEST(Spearman, EqualsPearsonOfRanks) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coarse(0, 6);  // forces ties
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 3 + rng() % 40;
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      x[i] = coarse(rng);
      y[i] = coarse(rng);
    }
    if (*std::max_element(x.begin(), x.end()) == *std::min_element(x.begin(), x.end()) ||
        *std::max_element(y.begin(), y.end()) == *std::min_element(y.begin(), y.end())) {
      continue;
    }
    EXPECT_EQ(spearman_r(x, y), pearson_r(average_ranks(x), average_ranks(y)));
  }
}

TEST(IncompleteBeta, ClosedForms) {
  // I_x(1, b) = 1 - (1 - x)^b and I_x(a, 1) = x^a.
  for (double x : {0.01, 0.2, 0.5, 0.77, 0.999}) {
    EXPECT_NEAR(regularized_incomplete_beta(1.0, 0.5, x), 1.0 - std::sqrt(1.0 - x), 1e-14);
    EXPECT_NEAR(regularized_incomplete_beta(2.5, 1.0, x), std::pow(x, 2.5), 1e-14);
  }
  EXPECT_EQ(regularized_incomplete_beta(3, 4, 0.0), 0.0);
  EXPECT_EQ(regularized_incomplete_beta(3, 4, 1.0), 1.0);
}

TEST(PValue, KnownValues) {
  EXPECT_EQ(p_value(0.0, 3), 1.0);
  EXPECT_EQ(p_value(0.0, 50), 1.0);
  EXPECT_EQ(p_value(1.0, 10), 0.0);
  EXPECT_EQ(p_value(-1.0, 10), 0.0);
  // df = 2: P(|T| > t) = 1 - t / sqrt(2 + t^2); r = 0.8 gives t = sqrt(2) * 4/3.
  const double t = 0.8 * std::sqrt(2.0 / (1.0 - 0.64));
  EXPECT_NEAR(p_value(0.8, 4), 1.0 - t / std::sqrt(2.0 + t * t), 1e-12);
  EXPECT_NEAR(p_value(0.8, 4), 0.2, 1e-12);
  EXPECT_THROW(p_value(0.5, 2), DataError);
  EXPECT_THROW(p_value(1.5, 10), DataError);
}

TEST(PValue, MatchesQuadratureOracle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> rdist(-0.98, 0.98);
  for (int trial = 0; trial < 100; ++trial) {
    const double r = rdist(rng);
    const size_t n = 3 + rng() % 120;
    const double df = static_cast<double>(n - 2);
    const double t = r * std::sqrt(df / (1.0 - r * r));
    EXPECT_NEAR(p_value(r, n), t_two_sided_by_quadrature(t, df), 1e-6)
        << "r=" << r << " n=" << n;
  }
}

TEST(PValue, Monotonicity) {
  for (size_t n : {3u, 5u, 20u, 200u}) {
    double prev = 1.0;
    for (double r = 0.05; r < 1.0; r += 0.05) {
      const double p = p_value(r, n);
      EXPECT_LT(p, prev);
      EXPECT_EQ(p, p_value(-r, n));
      prev = p;
    }
  }
  for (double r : {0.1, 0.4, 0.9}) {
    double prev = 1.0;
    for (size_t n = 3; n < 200; n += 7) {
      const double p = p_value(r, n);
      EXPECT_LT(p, prev);
      prev = p;
    }
  }
}

TEST(Stars, Boundaries) {
  EXPECT_EQ(stars(0.0009), "***");
  EXPECT_EQ(stars(0.001), "**");
  EXPECT_EQ(stars(0.009), "**");
  EXPECT_EQ(stars(0.01), "*");
  EXPECT_EQ(stars(0.04), "*");
  EXPECT_EQ(stars(0.05), "");
  EXPECT_EQ(stars(1.0), "");
  EXPECT_EQ(stars(0.0), "***");
}

TEST(Align, IntersectsPresentCells) {
  MoralScoreMatrix model;
  model.cells[{"A", "t1"}].score = 0.5;
  model.cells[{"A", "t2"}].score = -0.5;
  CountryTopicMatrix survey;
  survey.cells[{"A", "t1"}] = {0.25, 3};
  survey.cells[{"B", "t1"}] = {0.75, 3};
  const auto aligned = align(model, survey);
  ASSERT_EQ(aligned.n(), 1u);
  EXPECT_EQ(aligned.keys[0], (CellKey{"A", "t1"}));
  EXPECT_EQ(aligned.model[0], 0.5);
  EXPECT_EQ(aligned.survey[0], 0.25);

  survey.cells.erase({"A", "t1"});
  EXPECT_THROW(align(model, survey), DataError);
  EXPECT_THROW(align(MoralScoreMatrix{}, survey), DataError);
}

TEST(Align, IdenticalKeySets) {
  MoralScoreMatrix model;
  CountryTopicMatrix survey;
  for (const char* c : {"X", "Y"}) {
    for (const char* t : {"a", "b", "c"}) {
      model.cells[{c, t}].score = 1.0;
      survey.cells[{c, t}] = {0.0, 1};
    }
  }
  EXPECT_EQ(align(model, survey).n(), 6u);
}

TEST(Correlate, FillsAllFields) {
  const auto res = correlate(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4},
                             CorrelationMethod::kSpearman);
  EXPECT_EQ(res.method, CorrelationMethod::kSpearman);
  EXPECT_EQ(res.n, 4u);
  EXPECT_NEAR(res.r, 0.8, 1e-15);
  EXPECT_NEAR(res.p, 0.2, 1e-12);
  EXPECT_EQ(res.stars, "");
}

}  // namespace
}  // namespace moralprobe
