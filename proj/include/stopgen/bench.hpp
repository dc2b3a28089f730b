// Copyright 2026 The stopgen Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Baseline vs suppression runs over a corpus, and the metrics on top.

#ifndef STOPGEN_BENCH_HPP_
#define STOPGEN_BENCH_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stopgen/evaluator.hpp"
#include "stopgen/problem.hpp"
#include "stopgen/session.hpp"
#include "stopgen/stream_sources.hpp"

namespace stopgen {

enum class Mode { kBaseline, kBs };

std::string_view to_string(Mode mode);  // "baseline" | "bs"
Mode parse_mode(std::string_view name);

struct RunReport {
  std::string problem_id;
  std::string model_id;
  std::string benchmark;
  Language language = Language::kPython;
  Mode mode = Mode::kBaseline;
  bool valid = true;
  std::string invalid_reason;

  std::size_t tokens_generated = 0;
  std::string stop_reason;  // accepted | eos | exhausted | cap | error
  bool passed = false;
  std::optional<std::size_t> stop_index;  // BS acceptance
  // Tokens of the passing unit (inclusive), relative to the generation.
  std::optional<std::size_t> span_first;
  std::optional<std::size_t> span_last;

  double wall_time_s = 0;
  double mean_time_per_token_s = 0;
  double bs_time_s = 0;
  // Unpaced replay: the recorded time the consumed tokens took to generate.
  std::optional<double> generation_time_s;
  std::size_t wellformedness_checks = 0;
  std::size_t test_executions = 0;
  std::size_t discard_hits = 0;
  std::vector<double> check_latencies_ms;
  std::vector<double> test_latencies_ms;

  // System-clock window of the generation, for matching power logs.
  std::optional<std::int64_t> start_ns;
  std::optional<std::int64_t> end_ns;
  std::optional<double> energy_j;
  std::optional<double> energy_per_token_j;

  std::string key() const { return model_id + "/" + problem_id; }
};

/// The time compared across modes: recorded generation time plus the
/// suppression overhead when replaying unpaced, else wall time.
double time_cost_s(const RunReport& report);

struct BenchConfig {
  SuppressionConfig suppression;  // object_language is set per problem
  std::size_t workers = 1;
  std::string benchmark;
  ReplayOptions replay;
  // Null: a ToolchainEvaluator per problem.
  std::function<std::unique_ptr<Evaluator>(const ProblemBundle&, const SuppressionConfig&)> evaluator_factory;
};

using Corpus = std::map<std::string, ProblemBundle>;

/// What baseline post-processing makes of a finished generation: the first
/// well-formed unit named after the entry point (else the only well-formed
/// unit), assembled like a suppression harness and run once.
struct PostProcessResult {
  bool passed = false;
  std::optional<CheckingUnit> unit;
  std::optional<std::size_t> span_first;
  std::optional<std::size_t> span_last;
  std::size_t wellformedness_checks = 0;
  std::size_t test_executions = 0;
  std::vector<double> check_latencies_ms;
  std::vector<double> test_latencies_ms;
};

PostProcessResult post_process(const std::vector<std::string>& tokens, const TestSuite& suite,
                               Evaluator& evaluator);

/// One report per trace, sorted by (problem id, model id). A trace without
/// a bundle gives an invalid report. ConfigurationError aborts the run; the
/// message says how many problems had finished.
std::vector<RunReport> run_benchmark(const Corpus& corpus, const std::vector<TraceRecord>& traces, Mode mode,
                                     const BenchConfig& config);

/// Same over a live endpoint, one request per bundle. Transcripts of what
/// was consumed are appended to `transcripts` when given.
std::vector<RunReport> run_benchmark_live(const Corpus& corpus, const EndpointConfig& endpoint, Mode mode,
                                          const BenchConfig& config, std::vector<TraceRecord>* transcripts);

struct PassAt1 {
  std::size_t passed = 0;
  std::size_t total = 0;
  double value() const { return total == 0 ? 0.0 : static_cast<double>(passed) / static_cast<double>(total); }
  std::string fraction() const { return std::to_string(passed) + "/" + std::to_string(total); }
};

/// Over valid reports. Throws Error when there are none.
PassAt1 pass_at_1(const std::vector<RunReport>& reports);

/// (base - bs) / base * 100; positive is a saving. nullopt when base is 0
/// and bs is not.
std::optional<double> delta_percent(double base, double bs);

struct MetricDelta {
  double baseline = 0;
  double bs = 0;
  std::optional<double> delta_pct;
};

struct PairedRow {
  std::string problem_id;
  std::string model_id;
  std::size_t tokens_baseline = 0;
  std::size_t tokens_bs = 0;
  bool passed_baseline = false;
  bool passed_bs = false;
  double time_baseline_s = 0;
  double time_bs_s = 0;
  std::optional<double> energy_baseline_j;
  std::optional<double> energy_bs_j;
  std::size_t test_executions_bs = 0;
};

struct DeltaReport {
  std::string model_id;
  std::string benchmark;
  std::size_t problems = 0;
  MetricDelta tokens;
  MetricDelta time_s;
  std::optional<MetricDelta> energy_j;  // only when every report has energy
  PassAt1 pass_baseline;
  PassAt1 pass_bs;
  double mean_test_executions_bs = 0;
  double mean_check_latency_ms_bs = 0;
  double mean_checks_bs = 0;
  std::vector<PairedRow> rows;
};

/// One DeltaReport per model id. Throws Error listing the symmetric
/// difference when the two sides do not cover the same problems.
std::vector<DeltaReport> compare_reports(const std::vector<RunReport>& baseline, const std::vector<RunReport>& bs);

struct PositionInput {
  std::size_t length = 0;  // tokens generated
  bool passed = false;
  std::optional<std::size_t> span_first;
  std::optional<std::size_t> span_last;
};

struct PositionAnalysis {
  std::vector<double> curve;  // curve[n] for n in [0, max_index)
  std::size_t bin_width = 0;
  std::vector<std::size_t> histogram;  // output lengths; last bin holds max_index
  std::size_t traces = 0;
  std::size_t passing = 0;
  std::optional<double> mean_first;
  std::optional<double> mean_last;
};

PositionAnalysis position_likelihood(const std::vector<PositionInput>& inputs, std::size_t max_index = 1000,
                                     std::size_t bin_width = 50);

struct PowerSample {
  std::int64_t timestamp_ns = 0;
  double watts = 0;
};

/// `timestamp_ns watts` per line; '#' starts a comment. Timestamps must
/// increase. Errors name the line.
std::vector<PowerSample> parse_power_log(const std::string& text, const std::string& origin = "<power log>");
std::vector<PowerSample> read_power_log(const std::filesystem::path& path);

struct EnergyResult {
  double joules = 0;
  double mean_watts = 0;
  std::optional<double> joules_per_token;  // absent for 0 tokens
};

/// Mean power over [start_ns, end_ns] (trapezoids, interpolated at the
/// edges) times the duration. Throws Error if the window is not covered.
EnergyResult integrate_energy(const std::vector<PowerSample>& samples, std::int64_t start_ns, std::int64_t end_ns,
                              std::size_t tokens);

/// Fills energy fields of every report whose window the samples cover;
/// returns how many were filled.
std::size_t attach_energy(std::vector<RunReport>& reports, const std::vector<PowerSample>& samples);

// Report files: JSON for machines, aligned text for diffing.
std::string reports_to_json(const std::vector<RunReport>& reports);
std::vector<RunReport> reports_from_json(const std::string& text, const std::string& origin = "<reports>");
std::vector<RunReport> read_reports(const std::filesystem::path& path);
void write_reports(const std::filesystem::path& path, const std::vector<RunReport>& reports);
std::string reports_table(const std::vector<RunReport>& reports);

std::string delta_to_json(const std::vector<DeltaReport>& deltas);
std::string delta_table(const std::vector<DeltaReport>& deltas);

std::string positions_to_json(const PositionAnalysis& analysis);
/// Columns: n curve. Then the histogram as bin_start count.
std::string positions_table(const PositionAnalysis& analysis);

}  // namespace stopgen

#endif  // STOPGEN_BENCH_HPP_
