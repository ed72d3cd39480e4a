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

#ifndef MORALPROBE_STATS_H_
#define MORALPROBE_STATS_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moralprobe/scoring.h"
#include "moralprobe/survey.h"

namespace moralprobe {

enum class NormalizationScheme { kMinMax, kZScore };

// Affine map sending min(v) to -1 and max(v) to +1.
std::vector<double> minmax_normalize(std::span<const double> v);

// Mean 0 and population (divisor n) standard deviation 1.
std::vector<double> zscore_normalize(std::span<const double> v);

std::vector<double> normalize(std::span<const double> v, NormalizationScheme scheme);

// Model and survey values over the (country, topic) cells both matrices have,
// in key order.
struct AlignedVectors {
  std::vector<CellKey> keys;
  std::vector<double> model;
  std::vector<double> survey;

  size_t n() const { return keys.size(); }
};

AlignedVectors align(const MoralScoreMatrix& model, const CountryTopicMatrix& survey);

// Product-moment correlation. Requires n >= 3 and non-constant inputs.
double pearson_r(std::span<const double> x, std::span<const double> y);

// Ranks starting at 1; tied values share the average of their ranks.
std::vector<double> average_ranks(std::span<const double> v);

double spearman_r(std::span<const double> x, std::span<const double> y);

// I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

// Two-sided p for H0: rho = 0, using t = r sqrt((n-2)/(1-r^2)) with n-2
// degrees of freedom.
double p_value(double r, size_t n);

// "***" p < 0.001, "**" p < 0.01, "*" p < 0.05, else "".
std::string stars(double p);

enum class CorrelationMethod { kPearson, kSpearman };

std::string_view method_name(CorrelationMethod method);
CorrelationMethod parse_method(std::string_view name);
NormalizationScheme parse_normalization(std::string_view name);

struct CorrelationResult {
  double r = 0.0;
  size_t n = 0;
  double p = 1.0;
  std::string stars;
  CorrelationMethod method = CorrelationMethod::kPearson;
};

CorrelationResult correlate(std::span<const double> x, std::span<const double> y,
                            CorrelationMethod method);

}  // namespace moralprobe

#endif  // MORALPROBE_STATS_H_
