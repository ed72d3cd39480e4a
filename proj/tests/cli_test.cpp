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

#include "moralprobe/cli.h"

#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "mock_sidecar.h"
#include "moralprobe/prompt.h"
#include "moralprobe/report.h"
#include "moralprobe/scoring.h"
#include "moralprobe/survey.h"
#include "test_util.h"

namespace moralprobe {
namespace {

namespace fs = std::filesystem;
using testing::fixture;
using testing::MockSidecar;
using testing::read_file;
using testing::TempDir;
using testing::write_file;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "moralprobe");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string preprocess_fixture(const TempDir& dir) {
  const auto out = (dir / "wvs.csv").string();
  const auto r = run({"preprocess", "wvs", "--input", fixture("wvs_sample.csv").string(),
                      "--country-map", fixture("country_map.csv").string(), "--topics",
                      fixture("wvs_topics.toml").string(), "--out", out});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  return out;
}

TEST(Cli, HelpAndUsage) {
  EXPECT_EQ(run({"--help"}).code, kExitOk);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  const auto r = run({"probe", "--out-dir", "x", "--reference-seed", "1"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("--survey"), std::string::npos);
}

TEST(Cli, PreprocessWritesMatrix) {
  TempDir dir;
  const auto path = preprocess_fixture(dir);
  const auto m = read_matrix(path);
  EXPECT_EQ(m.cells.size(), 12u);
  EXPECT_EQ(m.countries(), (std::vector<std::string>{"China", "Germany", "United States"}));
}

TEST(Cli, PreprocessPew) {
  TempDir dir;
  const auto r = run({"preprocess", "pew", "--input", fixture("pew_sample.csv").string(),
                      "--topics", fixture("pew_topics.toml").string(), "--out",
                      (dir / "pew.csv").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(read_matrix(dir / "pew.csv").countries(),
            (std::vector<std::string>{"Germany", "Kenya"}));
}

TEST(Cli, DataErrorsExitTwo) {
  TempDir dir;
  write_file(dir / "bad.csv", "country,topic,score,count\nA,t,1.5,3\n");
  const auto r = run({"probe", "--survey", (dir / "bad.csv").string(), "--out-dir",
                      (dir / "out").string(), "--reference-seed", "1"});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_EQ(run({"probe", "--survey", (dir / "missing.csv").string(), "--out-dir",
                 (dir / "out").string(), "--reference-seed", "1"})
                .code,
            kExitData);
}

TEST(Cli, BadOptionValuesExitOne) {
  TempDir dir;
  const auto survey = preprocess_fixture(dir);
  const auto base = std::vector<std::string>{"probe", "--survey", survey, "--out-dir",
                                             (dir / "o").string(), "--reference-seed", "1"};
  auto modes = base;
  modes.insert(modes.end(), {"--modes", "sideways"});
  EXPECT_EQ(run(modes).code, kExitUsage);
  auto pairs = base;
  pairs.insert(pairs.end(), {"--pairs", "9"});
  EXPECT_EQ(run(pairs).code, kExitUsage);
  EXPECT_EQ(run({"probe", "--survey", survey, "--out-dir", (dir / "o").string()}).code,
            kExitUsage);
  EXPECT_EQ(run({"probe", "--survey", survey, "--out-dir", (dir / "o").string(),
                 "--backend-url", "localhost:1", "--model", "m"})
                .code,
            kExitUsage);
}

TEST(Cli, UnreachableBackendExitsThree) {
  TempDir dir;
  const auto survey = preprocess_fixture(dir);
  int port = 0;
  {
    MockSidecar closed;
    port = closed.port();
  }
  const auto r = run({"probe", "--survey", survey, "--out-dir", (dir / "o").string(),
                      "--backend-url", "http://127.0.0.1:" + std::to_string(port), "--model",
                      "gpt2", "--retries", "2"});
  EXPECT_EQ(r.code, kExitBackend) << r.err;
}

TEST(Cli, ProbeWritesPairAndAverageFiles) {
  TempDir dir;
  const auto survey = preprocess_fixture(dir);
  const auto out = dir / "scores";
  const auto r = run({"probe", "--survey", survey, "--out-dir", out.string(),
                      "--reference-seed", "42", "--modes", "in"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* name : {"scores_in_pair1.csv", "scores_in_pair2.csv", "scores_in_pair3.csv",
                           "scores_in_pair4.csv", "scores_in_pair5.csv", "scores_in_avg.csv",
                           "probe_manifest.json"}) {
    EXPECT_TRUE(fs::exists(out / name)) << name;
  }
  EXPECT_FALSE(fs::exists(out / "scores_people_avg.csv"));
  EXPECT_EQ(read_scores(out / "scores_in_avg.csv").cells.size(), 12u);
}

TEST(Cli, ProbeRemoteMatchesReference) {
  MockSidecar sidecar(42, "gpt2", "/api");
  sidecar.fail_next(2);
  TempDir dir;
  const auto survey = preprocess_fixture(dir);
  const auto remote = run({"probe", "--survey", survey, "--out-dir", (dir / "r").string(),
                           "--backend-url", sidecar.url(), "--model", "gpt2", "--pairs", "2",
                           "--modes", "people"});
  ASSERT_EQ(remote.code, kExitOk) << remote.err;
  const auto local = run({"probe", "--survey", survey, "--out-dir", (dir / "l").string(),
                          "--reference-seed", "42", "--pairs", "2", "--modes", "people"});
  ASSERT_EQ(local.code, kExitOk);
  EXPECT_EQ(read_file(dir / "r" / "scores_people_pair2.csv"),
            read_file(dir / "l" / "scores_people_pair2.csv"));
  const auto unknown = run({"probe", "--survey", survey, "--out-dir", (dir / "u").string(),
                            "--backend-url", sidecar.url(), "--model", "gpt-j"});
  EXPECT_EQ(unknown.code, kExitBackend);
}

TEST(Cli, AnalyzeAndReport) {
  TempDir dir;
  const auto survey = preprocess_fixture(dir);
  const auto scores = dir / "scores";
  ASSERT_EQ(run({"probe", "--survey", survey, "--out-dir", scores.string(),
                 "--reference-seed", "42", "--pairs", "1,3"})
                .code,
            kExitOk);
  const auto results = dir / "results.csv";
  const auto a = run({"analyze", "--scores", scores.string(), "--survey", survey, "--model",
                      "ref", "--out", results.string()});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  const auto records = read_results(results);
  ASSERT_EQ(records.size(), 6u);  // 2 modes x (2 pairs + avg)
  for (const auto& rec : records) {
    EXPECT_EQ(rec.dataset, "wvs");
    EXPECT_EQ(rec.normalization, "minmax");
    EXPECT_EQ(rec.result.n, 12u);
  }

  const auto report_args = [&](const fs::path& out) {
    return std::vector<std::string>{"report",  "--results",    results.string(),
                                    "--out-dir", out.string(),   "--format",
                                    "both",      "--survey",     survey,
                                    "--scores-dir", scores.string()};
  };
  ASSERT_EQ(run(report_args(dir / "rep1")).code, kExitOk);
  ASSERT_EQ(run(report_args(dir / "rep2")).code, kExitOk);
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir / "rep1")) {
    names.push_back(entry.path().filename().string());
    EXPECT_EQ(read_file(entry.path()), read_file(dir / "rep2" / entry.path().filename()));
  }
  std::sort(names.begin(), names.end());
  for (const char* want : {"correlation_table_wvs.csv", "correlation_table_wvs.md",
                           "survey_histogram.csv", "survey_boxplot.csv",
                           "boxplot_in_avg.csv", "histogram_people_pair3.csv"}) {
    EXPECT_TRUE(std::find(names.begin(), names.end(), want) != names.end()) << want;
  }
  const auto table = read_file(dir / "rep1" / "correlation_table_wvs.csv");
  EXPECT_EQ(table.rfind("Model,Tokens,Mode,r,p-value\nref,pair1,in,", 0), 0u) << table;
}

TEST(Cli, AnalyzeRejectsMismatchedSurvey) {
  TempDir dir;
  const auto survey = preprocess_fixture(dir);
  ASSERT_EQ(run({"probe", "--survey", survey, "--out-dir", (dir / "s").string(),
                 "--reference-seed", "1", "--modes", "in", "--pairs", "1"})
                .code,
            kExitOk);
  write_file(dir / "other.csv", "country,topic,score,count\nMars,x,0.1,1\n");
  const auto r = run({"analyze", "--scores", (dir / "s").string(), "--survey",
                      (dir / "other.csv").string(), "--out", (dir / "r.csv").string()});
  EXPECT_EQ(r.code, kExitData);
}

TEST(ShippedConfig, LoadsAndMatchesDefaults) {
  const fs::path dir(MORALPROBE_CONFIG_DIR);
  EXPECT_EQ(load_pairs(dir / "pairs.toml"), canonical_pairs());
  const auto wvs = load_topic_map(dir / "wvs_topics.toml");
  EXPECT_EQ(wvs.size(), 19u);
  EXPECT_EQ(wvs.at("Q185"), "divorce");
  const auto pew = load_topic_map(dir / "pew_topics.toml");
  EXPECT_EQ(pew.size(), 8u);
  EXPECT_EQ(pew.at("Q84B"), "getting a divorce");
}

}  // namespace
}  // namespace moralprobe
