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
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "moralprobe/error.h"

namespace moralprobe {

namespace {

void require_spread(std::span<const double> v, std::string_view op) {
  if (v.size() < 2) {
    throw DataError(fmt::format("{} needs at least 2 values, got {}", op, v.size()));
  }
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (!(*hi > *lo)) throw DataError(fmt::format("{} of a constant vector", op));
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void require_correlatable(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError(fmt::format("vectors differ in length ({} vs {})", x.size(), y.size()));
  }
  if (x.size() < 3) {
    throw DataError(fmt::format("correlation needs n >= 3, got {}", x.size()));
  }
}

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEpsilon = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace

std::vector<double> minmax_normalize(std::span<const double> v) {
  require_spread(v, "min-max normalization");
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) {
    if (x == lo) {
      out.push_back(-1.0);
    } else if (x == hi) {
      out.push_back(1.0);
    } else {
      out.push_back(2.0 * (x - lo) / (hi - lo) - 1.0);
    }
  }
  return out;
}

std::vector<double> zscore_normalize(std::span<const double> v) {
  require_spread(v, "z-score normalization");
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double sd = std::sqrt(ss / static_cast<double>(v.size()));
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) out.push_back((x - m) / sd);
  return out;
}

std::vector<double> normalize(std::span<const double> v, NormalizationScheme scheme) {
  return scheme == NormalizationScheme::kMinMax ? minmax_normalize(v)
                                                : zscore_normalize(v);
}

AlignedVectors align(const MoralScoreMatrix& model, const CountryTopicMatrix& survey) {
  if (model.cells.empty()) throw DataError("model score matrix is empty");
  if (survey.empty()) throw DataError("survey matrix is empty");
  AlignedVectors aligned;
  for (const auto& [key, cell] : model.cells) {
    const auto it = survey.cells.find(key);
    if (it == survey.cells.end()) continue;
    aligned.keys.push_back(key);
    aligned.model.push_back(cell.score);
    aligned.survey.push_back(it->second.score);
  }
  if (aligned.keys.empty()) {
    throw DataError("model and survey matrices share no (country, topic) cells");
  }
  return aligned;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  require_correlatable(x, y);
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("correlation of a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i + 1;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double spearman_r(std::span<const double> x, std::span<const double> y) {
  require_correlatable(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson_r(rx, ry);
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw std::domain_error("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double df) {
  if (!(df > 0.0)) throw std::domain_error("t distribution needs df > 0");
  if (std::isinf(t)) return 0.0;
  return regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

double p_value(double r, size_t n) {
  if (n < 3) throw DataError(fmt::format("p-value needs n >= 3, got {}", n));
  if (!(std::abs(r) <= 1.0)) throw DataError(fmt::format("|r| = {} exceeds 1", r));
  if (std::abs(r) == 1.0) return 0.0;
  if (r == 0.0) return 1.0;
  const double df = static_cast<double>(n - 2);
  // df / (df + t^2) simplifies to 1 - r^2, which avoids forming t.
  const double x = (1.0 - r) * (1.0 + r);
  return std::clamp(regularized_incomplete_beta(0.5 * df, 0.5, x), 0.0, 1.0);
}

std::string stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

std::string_view method_name(CorrelationMethod method) {
  return method == CorrelationMethod::kPearson ? "pearson" : "spearman";
}

CorrelationMethod parse_method(std::string_view name) {
  if (name == "pearson") return CorrelationMethod::kPearson;
  if (name == "spearman") return CorrelationMethod::kSpearman;
  throw UsageError(fmt::format("unknown correlation method '{}'", name));
}

NormalizationScheme parse_normalization(std::string_view name) {
  if (name == "minmax") return NormalizationScheme::kMinMax;
  if (name == "zscore") return NormalizationScheme::kZScore;
  throw UsageError(fmt::format("unknown normalization '{}'", name));
}

CorrelationResult correlate(std::span<const double> x, std::span<const double> y,
                            CorrelationMethod method) {
  CorrelationResult result;
  result.method = method;
  result.n = x.size();
  result.r = method == CorrelationMethod::kPearson ? pearson_r(x, y) : spearman_r(x, y);
  result.p = p_value(result.r, result.n);
  result.stars = stars(result.p);
  return result;
}

}  // namespace moralprobe
