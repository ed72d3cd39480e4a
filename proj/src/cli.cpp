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

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "moralprobe/backend.h"
#include "moralprobe/csv.h"
#include "moralprobe/error.h"
#include "moralprobe/prompt.h"
#include "moralprobe/report.h"
#include "moralprobe/scoring.h"
#include "moralprobe/stats.h"
#include "moralprobe/survey.h"

namespace moralprobe {

namespace fs = std::filesystem;

namespace {

struct PreprocessArgs {
  std::string input;
  std::string country_map;
  std::string topics;
  std::string out;
  bool missing_as_zero = false;
  bool pew_literal = false;
};

struct ProbeArgs {
  std::string survey;
  std::string out_dir;
  std::string backend_url;
  std::string model;
  std::optional<std::uint64_t> reference_seed;
  std::string modes = "in,people";
  std::string pairs = "1-5";
  std::string pairs_config;
  bool no_comma = false;
  bool first_token_only = false;
  bool skip_failures = false;
  int max_in_flight = 8;
  int retries = 5;
};

struct AnalyzeArgs {
  std::vector<std::string> scores;
  std::string survey;
  std::string corr = "pearson";
  std::string normalize = "minmax";
  std::string model = "model";
  std::string dataset;
  std::string out;
};

struct ReportArgs {
  std::vector<std::string> results;
  std::string out_dir;
  std::string format = "both";
  std::string survey;
  std::string scores_dir;
  std::string normalize = "minmax";
  size_t bins = kDefaultHistogramBins;
};

int run_preprocess_wvs(const PreprocessArgs& a, std::ostream& out) {
  const auto topics = load_topic_map(a.topics);
  const auto map = load_country_map(a.country_map);
  const auto raw = select_survey_columns(read_delimited(a.input), kWvsCountryColumn, topics);
  const auto matrix = preprocess_wvs(raw, map, {a.missing_as_zero});
  write_matrix(a.out, matrix);
  out << fmt::format("wrote {} cells ({} countries x {} topics) to {}\n",
                     matrix.cells.size(), matrix.countries().size(),
                     matrix.topics().size(), a.out);
  return kExitOk;
}

int run_preprocess_pew(const PreprocessArgs& a, std::ostream& out) {
  const auto topics = load_topic_map(a.topics);
  const auto raw = select_survey_columns(read_delimited(a.input), kPewCountryColumn, topics);
  const auto matrix = preprocess_pew(raw, {a.pew_literal});
  write_matrix(a.out, matrix);
  out << fmt::format("wrote {} cells ({} countries x {} topics) to {}\n",
                     matrix.cells.size(), matrix.countries().size(),
                     matrix.topics().size(), a.out);
  return kExitOk;
}

std::unique_ptr<LogprobBackend> make_backend(const ProbeArgs& a) {
  if (a.reference_seed) return reference_backend(*a.reference_seed);
  std::string url = a.backend_url;
  if (url.empty()) url = backend_url_from_env().value_or("");
  if (url.empty()) {
    throw UsageError(
        "no backend: pass --backend-url, set MORALPROBE_BACKEND_URL, or use "
        "--reference-seed");
  }
  if (a.model.empty()) throw UsageError("--model is required for a remote backend");
  RemoteOptions options;
  options.endpoint = url;
  options.model = a.model;
  options.max_attempts = std::max(1, a.retries);
  try {
    return std::make_unique<RemoteBackend>(options);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int run_probe(const ProbeArgs& a, std::ostream& out) {
  const auto survey = read_matrix(a.survey);
  const auto available =
      a.pairs_config.empty() ? canonical_pairs() : load_pairs(a.pairs_config);
  const auto pairs = select_pairs(a.pairs, available);
  const auto modes = parse_modes(a.modes);
  if (a.max_in_flight < 1) throw UsageError("--max-in-flight must be at least 1");
  const auto backend = make_backend(a);

  const PromptStyle style{!a.no_comma};
  const auto cases = probe_cases(survey, modes, pairs, style);
  ScoringOptions options;
  options.first_token_only = a.first_token_only;
  options.skip_failures = a.skip_failures;
  options.max_in_flight = a.max_in_flight;

  const auto outcomes = score_cases(cases, *backend, options);
  size_t failed = 0;
  std::map<PromptMode, std::vector<PairScore>> by_mode;
  for (size_t i = 0; i < cases.size(); ++i) {
    if (outcomes[i].score) {
      by_mode[cases[i].mode].push_back(*outcomes[i].score);
    } else {
      ++failed;
    }
  }
  const auto provenance = backend->descriptor();
  std::vector<std::string> written;
  for (PromptMode mode : modes) {
    const auto& scores = by_mode[mode];
    for (const auto& pair : pairs) {
      const auto m = build_matrix(scores, mode, PairSelector::pair(pair.id), provenance);
      written.push_back(write_scores(a.out_dir, m).filename().string());
    }
    const auto avg = build_matrix(scores, mode, PairSelector::average(), provenance);
    written.push_back(write_scores(a.out_dir, avg).filename().string());
  }

  nlohmann::ordered_json manifest;
  manifest["backend"] = {
      {"name", provenance.name},
      {"kind", provenance.kind == BackendKind::kReference ? "reference" : "remote"},
      {"endpoint", provenance.endpoint ? nlohmann::ordered_json(*provenance.endpoint)
                                       : nlohmann::ordered_json(nullptr)},
      {"model_id", provenance.model_id ? nlohmann::ordered_json(*provenance.model_id)
                                       : nlohmann::ordered_json(nullptr)}};
  manifest["survey"] = fs::path(a.survey).filename().string();
  auto& mode_list = manifest["modes"] = nlohmann::ordered_json::array();
  for (PromptMode m : modes) mode_list.push_back(std::string(mode_name(m)));
  auto& pair_list = manifest["pairs"] = nlohmann::ordered_json::array();
  for (const auto& p : pairs) {
    pair_list.push_back({{"id", p.id}, {"positive", p.positive}, {"negative", p.negative}});
  }
  manifest["comma_after_country"] = style.comma_after_country;
  manifest["first_token_only"] = options.first_token_only;
  manifest["cases"] = cases.size();
  manifest["failed_cases"] = failed;
  manifest["files"] = written;
  write_text_file(fs::path(a.out_dir) / "probe_manifest.json", manifest.dump(2) + "\n");

  out << fmt::format("scored {} probe cases ({} failed); wrote {} score files to {}\n",
                     cases.size(), failed, written.size(), a.out_dir);
  return kExitOk;
}

std::vector<fs::path> expand_score_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& input : inputs) {
    const fs::path p(input);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.rfind("scores_", 0) == 0 &&
            entry.path().extension() == ".csv") {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  if (files.empty()) throw DataError("no score files found");
  return files;
}

int run_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const auto survey = read_matrix(a.survey);
  const auto method = parse_method(a.corr);
  std::optional<NormalizationScheme> scheme;
  if (a.normalize != "none") scheme = parse_normalization(a.normalize);
  const std::string dataset =
      a.dataset.empty() ? fs::path(a.survey).stem().string() : a.dataset;

  std::vector<AnalysisRecord> records;
  for (const auto& file : expand_score_inputs(a.scores)) {
    const auto matrix = read_scores(file);
    const auto aligned = align(matrix, survey);
    const auto model = scheme ? normalize(aligned.model, *scheme) : aligned.model;
    AnalysisRecord rec;
    rec.model = a.model;
    rec.dataset = dataset;
    rec.tokens = matrix.selector;
    rec.mode = matrix.mode;
    rec.normalization = a.normalize;
    rec.result = correlate(model, aligned.survey, method);
    records.push_back(std::move(rec));
  }
  write_text_file(a.out, format_results(records));
  out << fmt::format("wrote {} correlation results to {}\n", records.size(), a.out);
  return kExitOk;
}

std::string file_safe(std::string s) {
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) {
      c = '_';
    }
  }
  return s;
}

int run_report(const ReportArgs& a, std::ostream& out) {
  if (a.format != "csv" && a.format != "md" && a.format != "both") {
    throw UsageError(fmt::format("unknown --format '{}'", a.format));
  }
  std::vector<AnalysisRecord> records;
  for (const auto& path : a.results) {
    auto part = read_results(path);
    records.insert(records.end(), part.begin(), part.end());
  }
  if (records.empty()) throw DataError("no correlation results to report");

  const fs::path dir(a.out_dir);
  size_t files = 0;
  std::map<std::string, std::vector<CorrelationTableRow>> by_dataset;
  for (const auto& rec : records) {
    by_dataset[rec.dataset].push_back(
        {rec.model, rec.tokens, rec.mode, rec.result.r, rec.result.stars, rec.result.n});
  }
  for (const auto& [dataset, rows] : by_dataset) {
    const std::string stem = "correlation_table_" + file_safe(dataset);
    if (a.format != "md") {
      emit_correlation_table(dir / (stem + ".csv"), rows, TableFormat::kCsv);
      ++files;
    }
    if (a.format != "csv") {
      emit_correlation_table(dir / (stem + ".md"), rows, TableFormat::kMarkdown);
      ++files;
    }
  }

  if (!a.survey.empty()) {
    const auto survey = read_matrix(a.survey);
    std::vector<double> all;
    std::map<std::string, std::vector<double>> by_topic;
    for (const auto& [key, cell] : survey.cells) {
      all.push_back(cell.score);
      by_topic[key.second].push_back(cell.score);
    }
    write_text_file(dir / "survey_histogram.csv", format_histogram(histogram(all, a.bins)));
    write_text_file(dir / "survey_boxplot.csv", format_boxplots(boxplots_by_topic(by_topic)));
    files += 2;
  }

  if (!a.scores_dir.empty()) {
    const auto scheme = parse_normalization(a.normalize);
    for (const auto& file : expand_score_inputs({a.scores_dir})) {
      const auto matrix = read_scores(file);
      std::vector<double> raw;
      for (const auto& [key, cell] : matrix.cells) raw.push_back(cell.score);
      const auto normalized = normalize(raw, scheme);
      std::map<std::string, std::vector<double>> by_topic;
      size_t i = 0;
      for (const auto& [key, cell] : matrix.cells) by_topic[key.second].push_back(normalized[i++]);
      const std::string suffix =
          fmt::format("{}_{}.csv", mode_name(matrix.mode), matrix.selector.label());
      write_text_file(dir / ("boxplot_" + suffix), format_boxplots(boxplots_by_topic(by_topic)));
      ++files;
      if (scheme == NormalizationScheme::kMinMax) {
        write_text_file(dir / ("histogram_" + suffix),
                        format_histogram(histogram(normalized, a.bins)));
        ++files;
      }
    }
  }
  out << fmt::format("wrote {} report files to {}\n", files, a.out_dir);
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probe language models for cross-cultural moral norms and compare "
               "them with survey data."};
  app.name("moralprobe");
  app.require_subcommand(1);

  PreprocessArgs pre;
  auto* preprocess = app.add_subcommand("preprocess", "Aggregate survey responses per country");
  preprocess->require_subcommand(1);
  auto* wvs = preprocess->add_subcommand("wvs", "WVS wave 7 file (B_COUNTRY, Q177..Q195)");
  wvs->add_option("--input", pre.input, "Delimited WVS response file")->required();
  wvs->add_option("--country-map", pre.country_map, "code,name country mapping")->required();
  wvs->add_option("--topics", pre.topics, "Question id -> topic phrase config")->required();
  wvs->add_option("--out", pre.out, "Output matrix CSV")->required();
  wvs->add_flag("--missing-as-zero", pre.missing_as_zero,
                "Count sentinel codes -1/-2/-4/-5 as literal zeros");
  auto* pew = preprocess->add_subcommand("pew", "PEW 2013 file (COUNTRY, Q84A..Q84H)");
  pew->add_option("--input", pre.input, "Delimited PEW response file")->required();
  pew->add_option("--topics", pre.topics, "Question id -> topic phrase config")->required();
  pew->add_option("--out", pre.out, "Output matrix CSV")->required();
  pew->add_flag("--pew-literal", pre.pew_literal,
                "Code non-responses and 'Morally unacceptable' as -1");

  ProbeArgs probe;
  auto* probe_cmd = app.add_subcommand("probe", "Score prompts against a model backend");
  probe_cmd->add_option("--survey", probe.survey, "Country-topic matrix CSV")->required();
  probe_cmd->add_option("--out-dir", probe.out_dir, "Directory for score files")->required();
  probe_cmd->add_option("--backend-url", probe.backend_url,
                        "Sidecar URL (default: $MORALPROBE_BACKEND_URL)");
  probe_cmd->add_option("--model", probe.model, "Model id served by the sidecar");
  probe_cmd->add_option("--reference-seed", probe.reference_seed,
                        "Use the deterministic reference backend with this seed");
  probe_cmd->add_option("--modes", probe.modes, "Prompt modes, e.g. in,people")
      ->capture_default_str();
  probe_cmd->add_option("--pairs", probe.pairs, "Token pairs, e.g. 1,4,5 or 1-5 or all")
      ->capture_default_str();
  probe_cmd->add_option("--pairs-config", probe.pairs_config, "Custom token pair config");
  probe_cmd->add_flag("--no-comma", probe.no_comma, "Omit the comma after the country in 'in' mode");
  probe_cmd->add_flag("--first-token-only", probe.first_token_only,
                      "Score only the first token of each judgment");
  probe_cmd->add_flag("--skip-failures", probe.skip_failures,
                      "Leave failed cells out instead of aborting");
  probe_cmd->add_option("--max-in-flight", probe.max_in_flight, "Concurrent requests")
      ->capture_default_str();
  probe_cmd->add_option("--retries", probe.retries, "Attempts per request")
      ->capture_default_str();

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Correlate model scores with a survey");
  analyze_cmd->add_option("--scores", analyze.scores, "Score files or directories")
      ->required();
  analyze_cmd->add_option("--survey", analyze.survey, "Country-topic matrix CSV")->required();
  analyze_cmd->add_option("--corr", analyze.corr, "pearson or spearman")
      ->check(CLI::IsMember({"pearson", "spearman"}))
      ->capture_default_str();
  analyze_cmd->add_option("--normalize", analyze.normalize, "minmax, zscore or none")
      ->check(CLI::IsMember({"minmax", "zscore", "none"}))
      ->capture_default_str();
  analyze_cmd->add_option("--model", analyze.model, "Model label for the results")
      ->capture_default_str();
  analyze_cmd->add_option("--dataset", analyze.dataset,
                          "Dataset label (default: survey file stem)");
  analyze_cmd->add_option("--out", analyze.out, "Results CSV")->required();

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Emit tables and plot data");
  report_cmd->add_option("--results", report.results, "Results CSV from analyze")->required();
  report_cmd->add_option("--out-dir", report.out_dir, "Output directory")->required();
  report_cmd->add_option("--format", report.format, "csv, md or both")
      ->check(CLI::IsMember({"csv", "md", "both"}))
      ->capture_default_str();
  report_cmd->add_option("--survey", report.survey, "Survey matrix for distribution data");
  report_cmd->add_option("--scores-dir", report.scores_dir,
                         "Score files for per-topic model distributions");
  report_cmd->add_option("--normalize", report.normalize, "minmax or zscore for model plots")
      ->check(CLI::IsMember({"minmax", "zscore"}))
      ->capture_default_str();
  report_cmd->add_option("--bins", report.bins, "Histogram bins over [-1, 1]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return kExitUsage;
  }

  try {
    if (*wvs) return run_preprocess_wvs(pre, out);
    if (*pew) return run_preprocess_pew(pre, out);
    if (*probe_cmd) return run_probe(probe, out);
    if (*analyze_cmd) return run_analyze(analyze, out);
    if (*report_cmd) return run_report(report, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BackendError& e) {
    err << "backend error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace moralprobe
