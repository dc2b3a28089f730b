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


// stopgen: baseline and suppression runs over trace corpora or a live
// endpoint, plus the reports built on top of them.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "stopgen/bench.hpp"
#include "stopgen/config.hpp"
#include "stopgen/synth.hpp"

namespace fs = std::filesystem;
using namespace stopgen;

namespace {

struct Globals {
  std::size_t workers = 1;
  std::optional<double> timeout_s;
  std::optional<std::string> trigger;
  bool quiet = false;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

SuppressionConfig effective_config(const std::string& config_path, const Globals& g) {
  SuppressionConfig c = config_path.empty() ? SuppressionConfig{} : load_suppression_config(config_path);
  if (g.timeout_s) {
    if (!(*g.timeout_s > 0)) throw ConfigurationError("--timeout must be positive");
    c.test_timeout = std::chrono::duration_cast<Nanos>(std::chrono::duration<double>(*g.timeout_s));
  }
  if (g.trigger) c.trigger_policy = parse_trigger(*g.trigger);
  return c;
}

void summarize(const std::vector<RunReport>& reports, Mode mode) {
  std::size_t invalid = 0;
  for (const auto& r : reports) invalid += r.valid ? 0 : 1;
  std::cerr << to_string(mode) << ": " << reports.size() << " reports";
  if (invalid) std::cerr << " (" << invalid << " invalid)";
  if (invalid < reports.size()) {
    const PassAt1 p = pass_at_1(reports);
    std::cerr << ", pass@1 " << p.fraction() << " = " << p.value();
  }
  std::cerr << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stop code generation once a generated function passes its tests"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--workers", g.workers, "Problems run in parallel")->check(CLI::PositiveNumber);
  app.add_option("--timeout", g.timeout_s, "Test timeout in seconds (overrides the config)");
  app.add_option("--trigger", g.trigger, "Trigger policy (overrides the config)")
      ->check(CLI::IsMember({"token", "line", "delims"}));
  app.add_flag("-q,--quiet", g.quiet, "No summary on stderr");

  // run
  auto* run = app.add_subcommand("run", "Run baseline or suppression mode");
  std::string mode_name, corpus_dir, traces_path, endpoint_path, config_path, out_dir, benchmark;
  bool pacing = false;
  run->add_option("--mode", mode_name, "baseline | bs")->required()->check(CLI::IsMember({"baseline", "bs"}));
  run->add_option("--corpus", corpus_dir, "Directory of problem bundles")->required()->check(CLI::ExistingDirectory);
  auto* traces_opt = run->add_option("--traces", traces_path, "Trace file (JSON lines)")->check(CLI::ExistingFile);
  auto* endpoint_opt =
      run->add_option("--endpoint", endpoint_path, "Streaming endpoint config")->check(CLI::ExistingFile);
  traces_opt->excludes(endpoint_opt);
  run->add_option("--config", config_path, "Suppression config (JSON)")->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--benchmark", benchmark, "Benchmark name recorded in reports");
  run->add_flag("--pacing", pacing, "Replay with the recorded token spacing");

  // compare
  auto* compare = app.add_subcommand("compare", "Paired baseline/bs deltas");
  std::string base_path, bs_path, compare_out;
  compare->add_option("--baseline", base_path)->required()->check(CLI::ExistingFile);
  compare->add_option("--bs", bs_path)->required()->check(CLI::ExistingFile);
  compare->add_option("--out", compare_out, "Delta report (JSON); the table goes to stdout")->required();

  // analyze-positions
  auto* positions = app.add_subcommand("analyze-positions", "Where passing solutions sit in the output");
  std::string pos_traces, pos_reports, pos_out;
  std::size_t max_index = 1000, bin_width = 50;
  positions->add_option("--traces", pos_traces)->required()->check(CLI::ExistingFile);
  positions->add_option("--reports", pos_reports, "Reports carrying pass verdicts and spans")
      ->required()
      ->check(CLI::ExistingFile);
  positions->add_option("--out", pos_out, "Curve and histogram (JSON; .txt for columns)")->required();
  positions->add_option("--max-index", max_index)->check(CLI::PositiveNumber);
  positions->add_option("--bin-width", bin_width)->check(CLI::PositiveNumber);

  // energy
  auto* energy = app.add_subcommand("energy", "Attach energy from a power log to reports");
  std::string samples_path, energy_reports, energy_out;
  energy->add_option("--samples", samples_path, "`timestamp_ns watts` lines")->required()->check(CLI::ExistingFile);
  energy->add_option("--reports", energy_reports)->required()->check(CLI::ExistingFile);
  energy->add_option("--out", energy_out, "Reports with energy filled in")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "Babbling traces from canonical solutions");
  std::string synth_corpus, synth_out;
  SynthOptions so;
  synth->add_option("--corpus", synth_corpus)->required()->check(CLI::ExistingDirectory);
  synth->add_option("--out", synth_out, "Trace file")->required();
  synth->add_option("--seed", so.seed);
  synth->add_option("--per-problem", so.traces_per_problem)->check(CLI::PositiveNumber);
  synth->add_option("--cap", so.cap)->check(CLI::PositiveNumber);
  synth->add_option("--decoy-rate", so.decoy_rate)->check(CLI::Range(0.0, 1.0));
  synth->add_option("--fence-rate", so.fence_rate)->check(CLI::Range(0.0, 1.0));
  synth->add_option("--eos-rate", so.eos_rate)->check(CLI::Range(0.0, 1.0));
  synth->add_option("--model", so.model_id);
  synth->add_flag("--wrong", so.wrong, "Emit solutions that fail their tests");

  // convert-humaneval
  auto* convert = app.add_subcommand("convert-humaneval", "HumanEval-style JSON lines to problem bundles");
  std::string conv_in, conv_out, conv_lang = "python";
  convert->add_option("--in", conv_in)->required()->check(CLI::ExistingFile);
  convert->add_option("--out", conv_out, "Bundle directory")->required();
  convert->add_option("--language", conv_lang)->check(CLI::IsMember({"python", "java"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (traces_path.empty() == endpoint_path.empty()) throw ConfigurationError("give one of --traces or --endpoint");
      const Mode mode = parse_mode(mode_name);
      const Corpus corpus = load_corpus(corpus_dir);
      BenchConfig bc;
      bc.suppression = effective_config(config_path, g);
      bc.workers = g.workers;
      bc.benchmark = benchmark.empty() ? fs::path(corpus_dir).filename().string() : benchmark;
      bc.replay.pacing = pacing;
      std::vector<RunReport> reports;
      if (!traces_path.empty()) {
        reports = run_benchmark(corpus, read_traces(traces_path), mode, bc);
      } else {
        std::vector<TraceRecord> transcripts;
        reports = run_benchmark_live(corpus, load_endpoint_config(endpoint_path), mode, bc, &transcripts);
        write_traces(fs::path(out_dir) / "transcripts.jsonl", transcripts);
      }
      fs::create_directories(out_dir);
      write_reports(fs::path(out_dir) / "reports.json", reports);
      write_text(fs::path(out_dir) / "reports.txt", reports_table(reports));
      if (!g.quiet) summarize(reports, mode);
    } else if (*compare) {
      const auto deltas = compare_reports(read_reports(base_path), read_reports(bs_path));
      write_text(compare_out, delta_to_json(deltas));
      std::cout << delta_table(deltas);
    } else if (*positions) {
      const auto traces = read_traces(pos_traces);
      std::map<std::string, RunReport> by_key;
      for (auto& r : read_reports(pos_reports)) by_key.emplace(r.key(), std::move(r));
      std::vector<PositionInput> inputs;
      for (const auto& t : traces) {
        const auto it = by_key.find(t.model_id + "/" + t.problem_id);
        if (it == by_key.end()) throw Error("no report for trace " + t.model_id + "/" + t.problem_id);
        PositionInput in;
        in.length = t.tokens.size();
        in.passed = it->second.passed;
        in.span_first = it->second.span_first;
        in.span_last = it->second.span_last;
        inputs.push_back(in);
      }
      const auto analysis = position_likelihood(inputs, max_index, bin_width);
      const bool table = fs::path(pos_out).extension() == ".txt";
      write_text(pos_out, table ? positions_table(analysis) : positions_to_json(analysis));
    } else if (*energy) {
      auto reports = read_reports(energy_reports);
      const std::size_t filled = attach_energy(reports, read_power_log(samples_path));
      write_reports(energy_out, reports);
      if (!g.quiet) std::cerr << "energy attached to " << filled << " of " << reports.size() << " reports\n";
    } else if (*synth) {
      const auto traces = synthesize_traces(load_corpus(synth_corpus), so);
      write_traces(synth_out, traces);
      if (!g.quiet) std::cerr << traces.size() << " traces\n";
    } else if (*convert) {
      // Skeleton: each record's `test` defines check(candidate); one case
      // calls it on the entry point.
      using json = nlohmann::json;
      std::istringstream in(read_text(conv_in));
      std::string line;
      std::size_t n = 0;
      fs::create_directories(conv_out);
      while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const json j = json::parse(line);
        ProblemBundle p;
        p.id = j.at("task_id").get<std::string>();
        p.language = parse_language(conv_lang);
        p.prompt = j.at("prompt").get<std::string>();
        p.suite.language = p.language;
        p.suite.entry_point = j.at("entry_point").get<std::string>();
        p.suite.cases = {j.at("test").get<std::string>() + "\ncheck(" + p.suite.entry_point + ")"};
        if (j.contains("canonical_solution")) p.canonical_solution = j["canonical_solution"].get<std::string>();
        p.validate();
        std::string file = p.id;
        for (char& c : file) c = std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
        write_text(fs::path(conv_out) / (file + ".json"), serialize_problem(p));
        ++n;
      }
      if (!g.quiet) std::cerr << n << " bundles\n";
    }
  } catch (const ConfigurationError& e) {
    std::cerr << "stopgen: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "stopgen: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
