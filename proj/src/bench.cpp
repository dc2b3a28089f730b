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

#include "stopgen/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace stopgen {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

double seconds(Nanos d) { return std::chrono::duration<double>(d).count(); }
double millis(Nanos d) { return std::chrono::duration<double, std::milli>(d).count(); }

std::int64_t system_now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::unique_ptr<Evaluator> make_evaluator(const BenchConfig& config, const ProblemBundle& problem,
                                          const SuppressionConfig& sc) {
  if (config.evaluator_factory) return config.evaluator_factory(problem, sc);
  Toolchain tc = sc.effective_toolchain();
  for (const auto& d : problem.suite.dependencies) tc.dependencies.push_back(d);
  return std::make_unique<ToolchainEvaluator>(tc, sc.object_language, RunOptions{sc.test_timeout, sc.timeout_scope},
                                              problem.id);
}

SuppressionConfig config_for(const BenchConfig& config, const ProblemBundle& problem) {
  SuppressionConfig sc = config.suppression;
  sc.object_language = problem.language;
  return sc;
}

// Token indices (inclusive) overlapping [raw_begin, raw_end).
std::pair<std::size_t, std::size_t> token_span(const std::vector<std::size_t>& ends, std::size_t raw_begin,
                                               std::size_t raw_end) {
  if (ends.empty()) return {0, 0};
  auto first = std::upper_bound(ends.begin(), ends.end(), raw_begin) - ends.begin();
  auto last = std::lower_bound(ends.begin(), ends.end(), raw_end) - ends.begin();
  const std::size_t top = ends.size() - 1;
  return {std::min<std::size_t>(first, top), std::min<std::size_t>(last, top)};
}

RunReport blank_report(const ProblemBundle* problem, const TraceRecord* trace, Mode mode, const BenchConfig& config) {
  RunReport r;
  r.mode = mode;
  r.benchmark = config.benchmark;
  if (trace) {
    r.problem_id = trace->problem_id;
    r.model_id = trace->model_id;
    r.language = trace->language;
  }
  if (problem) {
    r.problem_id = problem->id;
    r.language = problem->language;
  }
  return r;
}

RunReport run_one(const ProblemBundle& problem, TokenSource& source, Mode mode, const BenchConfig& config,
                  RunReport report) {
  const SuppressionConfig sc = config_for(config, problem);
  auto evaluator = make_evaluator(config, problem, sc);
  report.start_ns = system_now_ns();

  if (mode == Mode::kBs) {
    SessionResult res = run_session(source, problem, sc, *evaluator);
    report.end_ns = system_now_ns();
    report.tokens_generated = res.tokens;
    report.stop_reason = std::string(to_string(res.terminal));
    if (res.terminal == SessionTerminal::kError) {
      report.valid = false;
      report.invalid_reason = res.error;
    }
    report.passed = res.terminal == SessionTerminal::kAccepted;
    report.stop_index = res.stop_index;
    if (res.acceptance) {
      report.span_first = res.acceptance->first_token;
      report.span_last = res.acceptance->last_token;
    }
    report.wall_time_s = seconds(res.wall_time);
    report.bs_time_s = seconds(res.bs_time);
    report.wellformedness_checks = res.counters.wellformedness_checks;
    report.test_executions = res.counters.test_executions;
    report.discard_hits = res.counters.discard_hits;
    for (auto d : res.check_latencies) report.check_latencies_ms.push_back(millis(d));
    for (auto d : res.test_latencies) report.test_latencies_ms.push_back(millis(d));
  } else {
    const auto t0 = Clock::now();
    std::vector<std::string> tokens;
    bool eos = false;
    try {
      while (tokens.size() < sc.max_output_tokens) {
        auto ev = source.next();
        if (!ev) break;
        if (ev->is_eos) {
          eos = true;
          break;
        }
        tokens.push_back(std::move(ev->text));
      }
      if (!eos) source.cancel();
    } catch (const SourceError& e) {
      report.valid = false;
      report.invalid_reason = e.what();
    }
    report.end_ns = system_now_ns();
    report.wall_time_s = seconds(Clock::now() - t0);
    report.tokens_generated = tokens.size();
    report.stop_reason = !report.valid ? "error" : (eos ? "eos" : "cap");
    if (report.valid) {
      PostProcessResult pp = post_process(tokens, problem.suite, *evaluator);
      report.passed = pp.passed;
      if (pp.passed) {
        report.span_first = pp.span_first;
        report.span_last = pp.span_last;
      }
      report.wellformedness_checks = pp.wellformedness_checks;
      report.test_executions = pp.test_executions;
      report.check_latencies_ms = pp.check_latencies_ms;
      report.test_latencies_ms = pp.test_latencies_ms;
    }
  }
  report.mean_time_per_token_s =
      report.tokens_generated == 0 ? 0.0 : report.wall_time_s / static_cast<double>(report.tokens_generated);
  return report;
}

// Runs jobs [0, n) on up to `workers` threads. A ConfigurationError stops
// the pool from taking new work and is rethrown with a progress summary.
template <typename Job>
void run_pool(std::size_t n, std::size_t workers, Job job) {
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> completed{0};
  std::atomic<bool> abort{false};
  std::atomic<bool> other{false};
  std::mutex mu;
  std::string first_error;
  auto work = [&] {
    for (;;) {
      if (abort) return;
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        job(i);
        ++completed;
      } catch (const ConfigurationError& e) {
        std::lock_guard lock(mu);
        if (first_error.empty()) first_error = e.what();
        abort = true;
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (first_error.empty()) first_error = e.what();
        other = true;
        abort = true;
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(workers, n));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (abort) {
    std::string msg = "aborted after " + std::to_string(completed.load()) + " of " + std::to_string(n) +
                      " problems: " + first_error;
    if (other) throw Error(msg);
    throw ConfigurationError(msg);
  }
}

// Time to the n-th token of a recorded trace. The wait for the first token
// is not recorded; it is taken to be the mean spacing.
double recorded_time_s(const TraceRecord& trace, std::size_t n) {
  const auto& ts = *trace.timestamps_ns;
  if (n == 0 || ts.empty()) return 0.0;
  n = std::min(n, ts.size());
  const double gap = ts.size() > 1 ? static_cast<double>(ts.back() - ts.front()) / static_cast<double>(ts.size() - 1) : 0.0;
  return (static_cast<double>(ts[n - 1] - ts.front()) + gap) / 1e9;
}

void sort_reports(std::vector<RunReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const RunReport& a, const RunReport& b) {
    return std::tie(a.problem_id, a.model_id) < std::tie(b.problem_id, b.model_id);
  });
}

}  // namespace

std::string_view to_string(Mode mode) { return mode == Mode::kBaseline ? "baseline" : "bs"; }

Mode parse_mode(std::string_view name) {
  if (name == "baseline") return Mode::kBaseline;
  if (name == "bs") return Mode::kBs;
  throw ParseError("unknown mode '" + std::string(name) + "' (baseline|bs)");
}

PostProcessResult post_process(const std::vector<std::string>& tokens, const TestSuite& suite, Evaluator& evaluator) {
  PostProcessResult out;
  std::string text;
  std::vector<std::size_t> ends;
  for (const auto& t : tokens) {
    text += t;
    ends.push_back(text.size());
  }
  const Language lang = suite.language;
  Detection det = detect_complete_units(text, lang);
  std::vector<CheckingUnit> units = candidate_units(det);
  const std::string preamble = extract_preamble(text, lang);

  // Babble repeats itself; identical units are checked once.
  CheckCache cache;
  auto check = [&](const CheckingUnit& u, std::span<const CheckingUnit> siblings) {
    std::string key = CheckCache::key(u, preamble, siblings);
    if (const Verdict* hit = cache.find(key)) return *hit;
    const auto t0 = Clock::now();
    Verdict v = evaluator.check(u, preamble, siblings);
    out.check_latencies_ms.push_back(millis(Clock::now() - t0));
    ++out.wellformedness_checks;
    cache.put(std::move(key), v);
    return v;
  };
  std::vector<Verdict> verdicts;
  for (const auto& u : units) verdicts.push_back(check(u, {}));
  if (lang == Language::kJava) {
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (verdicts[i].kind != Verdict::Kind::kRecoverable) continue;
      auto siblings = sibling_units(units, i, lang, suite.entry_point, [&](std::size_t j) {
        return verdicts[j].kind != Verdict::Kind::kFatalMalformed;
      });
      if (!siblings.empty()) verdicts[i] = check(units[i], siblings);
    }
  }

  std::vector<CheckingUnit> well_formed;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (verdicts[i].is_well_formed()) well_formed.push_back(units[i]);
  }
  auto eligible = [&](const CheckingUnit& u) {
    return !(lang == Language::kJava && u.name == "main" && suite.entry_point != "main");
  };
  std::optional<std::size_t> pick;
  for (std::size_t k = 0; k < well_formed.size() && !pick; ++k) {
    if (well_formed[k].name == suite.entry_point && eligible(well_formed[k])) pick = k;
  }
  if (!pick) {
    std::vector<std::size_t> candidates;
    for (std::size_t k = 0; k < well_formed.size(); ++k) {
      if (eligible(well_formed[k])) candidates.push_back(k);
    }
    if (candidates.size() == 1) pick = candidates.front();
  }
  if (!pick) return out;

  auto selected = select_harness_units(well_formed, *pick, lang, suite.entry_point);
  Harness harness;
  try {
    harness = assemble_harness(selected, preamble, suite);
  } catch (const HarnessAssemblyError&) {
    return out;
  }
  const auto t0 = Clock::now();
  TestOutcome outcome = evaluator.run(harness);
  out.test_latencies_ms.push_back(millis(Clock::now() - t0));
  out.test_executions = 1;
  out.passed = outcome.passed();
  out.unit = well_formed[*pick];
  auto [first, last] =
      token_span(ends, det.source.to_raw(out.unit->span.begin), det.source.to_raw(out.unit->span.end));
  out.span_first = first;
  out.span_last = last;
  return out;
}

double time_cost_s(const RunReport& r) {
  return r.generation_time_s ? *r.generation_time_s + r.bs_time_s : r.wall_time_s;
}

std::vector<RunReport> run_benchmark(const Corpus& corpus, const std::vector<TraceRecord>& traces, Mode mode,
                                     const BenchConfig& config) {
  config.suppression.validate();
  std::vector<RunReport> reports(traces.size());
  run_pool(traces.size(), config.workers, [&](std::size_t i) {
    const TraceRecord& trace = traces[i];
    auto it = corpus.find(trace.problem_id);
    if (it == corpus.end()) {
      RunReport r = blank_report(nullptr, &trace, mode, config);
      r.valid = false;
      r.invalid_reason = "no problem bundle for trace";
      r.stop_reason = "error";
      reports[i] = std::move(r);
      return;
    }
    if (it->second.language != trace.language) {
      RunReport r = blank_report(&it->second, &trace, mode, config);
      r.valid = false;
      r.invalid_reason = "trace language does not match the bundle";
      r.stop_reason = "error";
      reports[i] = std::move(r);
      return;
    }
    ReplaySource source(trace, config.replay);
    RunReport r = run_one(it->second, source, mode, config, blank_report(&it->second, &trace, mode, config));
    if (!config.replay.pacing && trace.timestamps_ns) r.generation_time_s = recorded_time_s(trace, r.tokens_generated);
    reports[i] = std::move(r);
  });
  sort_reports(reports);
  return reports;
}

std::vector<RunReport> run_benchmark_live(const Corpus& corpus, const EndpointConfig& endpoint, Mode mode,
                                          const BenchConfig& config, std::vector<TraceRecord>* transcripts) {
  config.suppression.validate();
  endpoint.validate(config.suppression.max_output_tokens);
  std::vector<const ProblemBundle*> problems;
  for (const auto& [id, p] : corpus) problems.push_back(&p);
  std::vector<RunReport> reports(problems.size());
  std::vector<TraceRecord> recorded(problems.size());
  run_pool(problems.size(), config.workers, [&](std::size_t i) {
    const ProblemBundle& p = *problems[i];
    RunReport base = blank_report(&p, nullptr, mode, config);
    base.model_id = endpoint.model;
    std::unique_ptr<EndpointSource> source;
    try {
      source = open_stream(endpoint, p.prompt, p.id, p.language);
    } catch (const SourceError& e) {
      base.valid = false;
      base.invalid_reason = e.what();
      base.stop_reason = "error";
      reports[i] = std::move(base);
      return;
    }
    reports[i] = run_one(p, *source, mode, config, std::move(base));
    source->cancel();
    recorded[i] = source->transcript();
  });
  if (transcripts) {
    for (auto& t : recorded) transcripts->push_back(std::move(t));
  }
  sort_reports(reports);
  return reports;
}

PassAt1 pass_at_1(const std::vector<RunReport>& reports) {
  PassAt1 p;
  for (const auto& r : reports) {
    if (!r.valid) continue;
    ++p.total;
    if (r.passed) ++p.passed;
  }
  if (p.total == 0) throw Error("pass@1 of an empty report set");
  return p;
}

std::optional<double> delta_percent(double base, double bs) {
  if (base == 0) return bs == 0 ? std::optional<double>(0.0) : std::nullopt;
  return (base - bs) / base * 100.0;
}

std::vector<DeltaReport> compare_reports(const std::vector<RunReport>& baseline, const std::vector<RunReport>& bs) {
  std::map<std::string, const RunReport*> b, s;
  for (const auto& r : baseline) b[r.key()] = &r;
  for (const auto& r : bs) s[r.key()] = &r;
  std::vector<std::string> only_b, only_s;
  for (const auto& [k, r] : b) {
    if (!s.count(k)) only_b.push_back(k);
  }
  for (const auto& [k, r] : s) {
    if (!b.count(k)) only_s.push_back(k);
  }
  if (!only_b.empty() || !only_s.empty()) {
    std::string msg = "report sets differ;";
    auto list = [&](const char* what, const std::vector<std::string>& v) {
      if (v.empty()) return;
      msg += std::string(" only in ") + what + ":";
      for (const auto& k : v) msg += " " + k;
      msg += ";";
    };
    list("baseline", only_b);
    list("bs", only_s);
    msg.pop_back();
    throw Error(msg);
  }

  std::map<std::string, DeltaReport> by_model;
  for (const auto& [k, rb] : b) {
    const RunReport* rs = s.at(k);
    if (!rb->valid || !rs->valid) continue;
    DeltaReport& d = by_model[rb->model_id];
    d.model_id = rb->model_id;
    if (d.benchmark.empty()) d.benchmark = rb->benchmark.empty() ? rs->benchmark : rb->benchmark;
    PairedRow row;
    row.problem_id = rb->problem_id;
    row.model_id = rb->model_id;
    row.tokens_baseline = rb->tokens_generated;
    row.tokens_bs = rs->tokens_generated;
    row.passed_baseline = rb->passed;
    row.passed_bs = rs->passed;
    row.time_baseline_s = time_cost_s(*rb);
    row.time_bs_s = time_cost_s(*rs);
    row.energy_baseline_j = rb->energy_j;
    row.energy_bs_j = rs->energy_j;
    row.test_executions_bs = rs->test_executions;
    d.rows.push_back(row);
  }

  std::vector<DeltaReport> out;
  for (auto& [model, d] : by_model) {
    const double n = static_cast<double>(d.rows.size());
    d.problems = d.rows.size();
    bool energy = true;
    double eb = 0, es = 0, checks = 0, tests = 0;
    std::vector<double> latencies;
    for (const auto& r : d.rows) {
      d.tokens.baseline += static_cast<double>(r.tokens_baseline) / n;
      d.tokens.bs += static_cast<double>(r.tokens_bs) / n;
      d.time_s.baseline += r.time_baseline_s / n;
      d.time_s.bs += r.time_bs_s / n;
      d.pass_baseline.total++;
      d.pass_bs.total++;
      d.pass_baseline.passed += r.passed_baseline;
      d.pass_bs.passed += r.passed_bs;
      if (r.energy_baseline_j && r.energy_bs_j) {
        eb += *r.energy_baseline_j / n;
        es += *r.energy_bs_j / n;
      } else {
        energy = false;
      }
      tests += static_cast<double>(r.test_executions_bs) / n;
      const RunReport* rs = s.at(r.model_id + "/" + r.problem_id);
      checks += static_cast<double>(rs->wellformedness_checks) / n;
      latencies.insert(latencies.end(), rs->check_latencies_ms.begin(), rs->check_latencies_ms.end());
    }
    d.tokens.delta_pct = delta_percent(d.tokens.baseline, d.tokens.bs);
    d.time_s.delta_pct = delta_percent(d.time_s.baseline, d.time_s.bs);
    if (energy && !d.rows.empty()) d.energy_j = MetricDelta{eb, es, delta_percent(eb, es)};
    d.mean_test_executions_bs = tests;
    d.mean_checks_bs = checks;
    d.mean_check_latency_ms_bs = mean(latencies);
    out.push_back(std::move(d));
  }
  return out;
}

PositionAnalysis position_likelihood(const std::vector<PositionInput>& inputs, std::size_t max_index,
                                     std::size_t bin_width) {
  if (bin_width == 0) throw Error("histogram bin width must be positive");
  PositionAnalysis a;
  a.bin_width = bin_width;
  a.traces = inputs.size();
  if (inputs.empty()) return a;
  a.curve.assign(max_index, 0.0);
  a.histogram.assign((max_index + bin_width - 1) / bin_width, 0);
  if (a.histogram.empty()) a.histogram.assign(1, 0);
  std::vector<double> cover(max_index, 0.0);
  double first_sum = 0, last_sum = 0;
  for (const auto& in : inputs) {
    a.histogram[std::min(in.length / bin_width, a.histogram.size() - 1)]++;
    if (!in.passed || !in.span_first || !in.span_last) continue;
    ++a.passing;
    first_sum += static_cast<double>(*in.span_first);
    last_sum += static_cast<double>(*in.span_last);
    for (std::size_t n = *in.span_first; n <= *in.span_last && n < max_index; ++n) cover[n] += 1.0;
  }
  for (std::size_t n = 0; n < max_index; ++n) a.curve[n] = cover[n] / static_cast<double>(inputs.size());
  if (a.passing > 0) {
    a.mean_first = first_sum / static_cast<double>(a.passing);
    a.mean_last = last_sum / static_cast<double>(a.passing);
  }
  return a;
}

std::vector<PowerSample> parse_power_log(const std::string& text, const std::string& origin) {
  std::vector<PowerSample> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    PowerSample s;
    std::string extra;
    if (!(fields >> s.timestamp_ns >> s.watts) || (fields >> extra)) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": expected '<timestamp_ns> <watts>'");
    }
    if (!std::isfinite(s.watts)) throw ParseError(origin + ":" + std::to_string(line_no) + ": watts not finite");
    if (!out.empty() && s.timestamp_ns <= out.back().timestamp_ns) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": timestamps must increase");
    }
    out.push_back(s);
  }
  return out;
}

std::vector<PowerSample> read_power_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read power log " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_power_log(buf.str(), path.string());
}

EnergyResult integrate_energy(const std::vector<PowerSample>& samples, std::int64_t start_ns, std::int64_t end_ns,
                              std::size_t tokens) {
  if (end_ns < start_ns) throw Error("energy window ends before it starts");
  if (samples.empty()) throw Error("no power samples");
  if (start_ns < samples.front().timestamp_ns || end_ns > samples.back().timestamp_ns) {
    throw Error("energy window [" + std::to_string(start_ns) + ", " + std::to_string(end_ns) +
                "] is outside the sampled range [" + std::to_string(samples.front().timestamp_ns) + ", " +
                std::to_string(samples.back().timestamp_ns) + "]");
  }
  auto power_at = [&](std::int64_t t) {
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const PowerSample& s, std::int64_t v) { return s.timestamp_ns < v; });
    if (it->timestamp_ns == t) return it->watts;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double f = static_cast<double>(t - lo.timestamp_ns) / static_cast<double>(hi.timestamp_ns - lo.timestamp_ns);
    return lo.watts + f * (hi.watts - lo.watts);
  };

  EnergyResult r;
  if (end_ns == start_ns) {
    r.mean_watts = power_at(start_ns);
  } else {
    // Breakpoints: window edges plus every sample strictly inside.
    std::vector<std::pair<std::int64_t, double>> pts{{start_ns, power_at(start_ns)}};
    for (const auto& s : samples) {
      if (s.timestamp_ns > start_ns && s.timestamp_ns < end_ns) pts.emplace_back(s.timestamp_ns, s.watts);
    }
    pts.emplace_back(end_ns, power_at(end_ns));
    // Accumulate watt-nanoseconds; one division keeps round inputs exact.
    double watt_ns = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double dt = static_cast<double>(pts[i].first - pts[i - 1].first);
      watt_ns += 0.5 * (pts[i].second + pts[i - 1].second) * dt;
    }
    r.joules = watt_ns / 1e9;
    r.mean_watts = watt_ns / static_cast<double>(end_ns - start_ns);
  }
  if (tokens > 0) r.joules_per_token = r.joules / static_cast<double>(tokens);
  return r;
}

std::size_t attach_energy(std::vector<RunReport>& reports, const std::vector<PowerSample>& samples) {
  std::size_t filled = 0;
  for (auto& r : reports) {
    if (!r.start_ns || !r.end_ns || samples.empty()) continue;
    if (*r.start_ns < samples.front().timestamp_ns || *r.end_ns > samples.back().timestamp_ns) continue;
    EnergyResult e = integrate_energy(samples, *r.start_ns, *r.end_ns, r.tokens_generated);
    r.energy_j = e.joules;
    r.energy_per_token_j = e.joules_per_token;
    ++filled;
  }
  return filled;
}

namespace {

template <typename T>
void put_opt(ordered_json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

ordered_json metric_json(const MetricDelta& m) {
  ordered_json j;
  j["baseline"] = m.baseline;
  j["bs"] = m.bs;
  put_opt(j, "delta_pct", m.delta_pct);
  return j;
}

std::string fmt(double v, int precision = 1) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(precision) << v;
  return o.str();
}

std::string fmt_delta(const std::optional<double>& d) { return d ? (*d >= 0 ? "+" : "") + fmt(*d) + "%" : "n/a"; }

}  // namespace

std::string reports_to_json(const std::vector<RunReport>& reports) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json j;
    j["problem_id"] = r.problem_id;
    j["model_id"] = r.model_id;
    j["benchmark"] = r.benchmark;
    j["language"] = std::string(to_string(r.language));
    j["mode"] = std::string(to_string(r.mode));
    j["valid"] = r.valid;
    if (!r.valid) j["invalid_reason"] = r.invalid_reason;
    j["tokens_generated"] = r.tokens_generated;
    j["stop_reason"] = r.stop_reason;
    j["passed"] = r.passed;
    put_opt(j, "stop_index", r.stop_index);
    put_opt(j, "span_first", r.span_first);
    put_opt(j, "span_last", r.span_last);
    j["wall_time_s"] = r.wall_time_s;
    j["mean_time_per_token_s"] = r.mean_time_per_token_s;
    j["bs_time_s"] = r.bs_time_s;
    put_opt(j, "generation_time_s", r.generation_time_s);
    j["wellformedness_checks"] = r.wellformedness_checks;
    j["test_executions"] = r.test_executions;
    j["discard_hits"] = r.discard_hits;
    j["check_latencies_ms"] = r.check_latencies_ms;
    j["test_latencies_ms"] = r.test_latencies_ms;
    put_opt(j, "start_ns", r.start_ns);
    put_opt(j, "end_ns", r.end_ns);
    put_opt(j, "energy_j", r.energy_j);
    put_opt(j, "energy_per_token_j", r.energy_per_token_j);
    arr.push_back(std::move(j));
  }
  ordered_json root;
  root["reports"] = std::move(arr);
  return root.dump(2) + "\n";
}

std::vector<RunReport> reports_from_json(const std::string& text, const std::string& origin) {
  std::vector<RunReport> out;
  try {
    json root = json::parse(text);
    for (const auto& j : root.at("reports")) {
      RunReport r;
      r.problem_id = j.at("problem_id").get<std::string>();
      r.model_id = j.value("model_id", "");
      r.benchmark = j.value("benchmark", "");
      r.language = parse_language(j.at("language").get<std::string>());
      r.mode = parse_mode(j.at("mode").get<std::string>());
      r.valid = j.value("valid", true);
      r.invalid_reason = j.value("invalid_reason", "");
      r.tokens_generated = j.at("tokens_generated").get<std::size_t>();
      r.stop_reason = j.value("stop_reason", "");
      r.passed = j.at("passed").get<bool>();
      r.stop_index = get_opt<std::size_t>(j, "stop_index");
      r.span_first = get_opt<std::size_t>(j, "span_first");
      r.span_last = get_opt<std::size_t>(j, "span_last");
      r.wall_time_s = j.value("wall_time_s", 0.0);
      r.mean_time_per_token_s = j.value("mean_time_per_token_s", 0.0);
      r.bs_time_s = j.value("bs_time_s", 0.0);
      r.generation_time_s = get_opt<double>(j, "generation_time_s");
      r.wellformedness_checks = j.value("wellformedness_checks", std::size_t{0});
      r.test_executions = j.value("test_executions", std::size_t{0});
      r.discard_hits = j.value("discard_hits", std::size_t{0});
      r.check_latencies_ms = j.value("check_latencies_ms", std::vector<double>{});
      r.test_latencies_ms = j.value("test_latencies_ms", std::vector<double>{});
      r.start_ns = get_opt<std::int64_t>(j, "start_ns");
      r.end_ns = get_opt<std::int64_t>(j, "end_ns");
      r.energy_j = get_opt<double>(j, "energy_j");
      r.energy_per_token_j = get_opt<double>(j, "energy_per_token_j");
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return out;
}

std::vector<RunReport> read_reports(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read reports " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return reports_from_json(buf.str(), path.string());
}

void write_reports(const std::filesystem::path& path, const std::vector<RunReport>& reports) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << reports_to_json(reports);
  if (!out) throw Error("cannot write " + path.string());
}

std::string reports_table(const std::vector<RunReport>& reports) {
  std::ostringstream o;
  o << std::left << std::setw(28) << "problem" << std::setw(18) << "model" << std::setw(9) << "mode" << std::right
    << std::setw(7) << "tokens" << std::setw(11) << "stop" << std::setw(7) << "pass" << std::setw(7) << "checks"
    << std::setw(7) << "tests" << std::setw(10) << "wall_s" << std::setw(10) << "bs_s" << std::setw(11)
    << "energy_j" << "\n";
  for (const auto& r : reports) {
    o << std::left << std::setw(28) << r.problem_id << std::setw(18) << r.model_id << std::setw(9)
      << to_string(r.mode) << std::right << std::setw(7) << r.tokens_generated << std::setw(11)
      << (r.valid ? r.stop_reason : "invalid") << std::setw(7) << (r.passed ? "yes" : "no") << std::setw(7)
      << r.wellformedness_checks << std::setw(7) << r.test_executions << std::setw(10) << fmt(r.wall_time_s, 3)
      << std::setw(10) << fmt(r.bs_time_s, 3) << std::setw(11) << (r.energy_j ? fmt(*r.energy_j, 2) : "-") << "\n";
  }
  return o.str();
}

std::string delta_to_json(const std::vector<DeltaReport>& deltas) {
  ordered_json arr = ordered_json::array();
  for (const auto& d : deltas) {
    ordered_json j;
    j["model"] = d.model_id;
    j["benchmark"] = d.benchmark;
    j["problems"] = d.problems;
    j["tokens"] = metric_json(d.tokens);
    j["time_s"] = metric_json(d.time_s);
    j["energy_j"] = d.energy_j ? metric_json(*d.energy_j) : ordered_json(nullptr);
    j["pass_at_1"] = {{"baseline", d.pass_baseline.value()},
                      {"baseline_fraction", d.pass_baseline.fraction()},
                      {"bs", d.pass_bs.value()},
                      {"bs_fraction", d.pass_bs.fraction()}};
    j["mean_test_executions_bs"] = d.mean_test_executions_bs;
    j["mean_checks_bs"] = d.mean_checks_bs;
    j["mean_check_latency_ms_bs"] = d.mean_check_latency_ms_bs;
    ordered_json rows = ordered_json::array();
    for (const auto& r : d.rows) {
      ordered_json row;
      row["problem_id"] = r.problem_id;
      row["tokens_baseline"] = r.tokens_baseline;
      row["tokens_bs"] = r.tokens_bs;
      row["passed_baseline"] = r.passed_baseline;
      row["passed_bs"] = r.passed_bs;
      row["time_baseline_s"] = r.time_baseline_s;
      row["time_bs_s"] = r.time_bs_s;
      put_opt(row, "energy_baseline_j", r.energy_baseline_j);
      put_opt(row, "energy_bs_j", r.energy_bs_j);
      row["test_executions_bs"] = r.test_executions_bs;
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    arr.push_back(std::move(j));
  }
  ordered_json root;
  root["deltas"] = std::move(arr);
  return root.dump(2) + "\n";
}

std::string delta_table(const std::vector<DeltaReport>& deltas) {
  std::ostringstream o;
  o << std::left << std::setw(20) << "model" << std::setw(16) << "benchmark" << std::right << std::setw(10)
    << "tok_base" << std::setw(10) << "tok_bs" << std::setw(10) << "tok_d" << std::setw(14) << "pass_base"
    << std::setw(14) << "pass_bs" << std::setw(11) << "cost_base" << std::setw(11) << "cost_bs" << std::setw(10)
    << "cost_d" << std::setw(6) << "unit" << std::setw(8) << "tests" << std::setw(10) << "check_ms" << "\n";
  for (const auto& d : deltas) {
    const MetricDelta& cost = d.energy_j ? *d.energy_j : d.time_s;
    const char* unit = d.energy_j ? "J" : "s";
    o << std::left << std::setw(20) << d.model_id << std::setw(16) << d.benchmark << std::right << std::setw(10)
      << fmt(d.tokens.baseline) << std::setw(10) << fmt(d.tokens.bs) << std::setw(10) << fmt_delta(d.tokens.delta_pct)
      << std::setw(14) << (fmt(d.pass_baseline.value(), 3) + " " + d.pass_baseline.fraction()) << std::setw(14)
      << (fmt(d.pass_bs.value(), 3) + " " + d.pass_bs.fraction()) << std::setw(11) << fmt(cost.baseline, 3)
      << std::setw(11) << fmt(cost.bs, 3) << std::setw(10) << fmt_delta(cost.delta_pct) << std::setw(6) << unit
      << std::setw(8) << fmt(d.mean_test_executions_bs, 2) << std::setw(10) << fmt(d.mean_check_latency_ms_bs, 1)
      << "\n";
  }
  return o.str();
}

std::string positions_to_json(const PositionAnalysis& a) {
  ordered_json j;
  j["traces"] = a.traces;
  j["passing"] = a.passing;
  put_opt(j, "mean_first", a.mean_first);
  put_opt(j, "mean_last", a.mean_last);
  j["curve"] = a.curve;
  j["bin_width"] = a.bin_width;
  j["histogram"] = a.histogram;
  return j.dump(2) + "\n";
}

std::string positions_table(const PositionAnalysis& a) {
  std::ostringstream o;
  o << "# traces " << a.traces << " passing " << a.passing;
  if (a.mean_first) o << " mean_first " << fmt(*a.mean_first, 2) << " mean_last " << fmt(*a.mean_last, 2);
  o << "\n# n curve\n";
  for (std::size_t n = 0; n < a.curve.size(); ++n) o << n << ' ' << fmt(a.curve[n], 6) << '\n';
  o << "# bin_start count\n";
  for (std::size_t b = 0; b < a.histogram.size(); ++b) o << b * a.bin_width << ' ' << a.histogram[b] << '\n';
  return o.str();
}

}  // namespace stopgen
