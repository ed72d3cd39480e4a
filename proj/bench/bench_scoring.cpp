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

// Parallel vs serial scoring fan-out over a synthetic survey grid.
#include <benchmark/benchmark.h>

#include <string>

#include "moralprobe/backend.h"
#include "moralprobe/prompt.h"
#include "moralprobe/scoring.h"

namespace moralprobe {
namespace {

std::vector<ProbeCase> grid_cases(int countries, int topics) {
  CountryTopicMatrix m;
  for (int c = 0; c < countries; ++c) {
    for (int t = 0; t < topics; ++t) {
      m.cells[{"country " + std::to_string(c), "topic " + std::to_string(t)}] = {0.0, 1};
    }
  }
  return probe_cases(m, {PromptMode::kIn, PromptMode::kPeople}, canonical_pairs());
}

void BM_ScoreSerial(benchmark::State& state) {
  const auto cases = grid_cases(static_cast<int>(state.range(0)), 19);
  ReferenceBackend backend(42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(score_cases_serial(cases, backend));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cases.size()));
}
BENCHMARK(BM_ScoreSerial)->Arg(10)->Arg(55);

void BM_ScoreParallel(benchmark::State& state) {
  const auto cases = grid_cases(static_cast<int>(state.range(0)), 19);
  ReferenceBackend backend(42);
  ScoringOptions options;
  options.max_in_flight = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(score_cases(cases, backend, options));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cases.size()));
}
BENCHMARK(BM_ScoreParallel)->Args({10, 1})->Args({10, 8})->Args({55, 8});

}  // namespace
}  // namespace moralprobe

BENCHMARK_MAIN();
