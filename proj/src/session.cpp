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

#include "stopgen/session.hpp"

#include <algorithm>
#include <set>

namespace stopgen {
namespace {

bool leaves_out(const CheckingUnit& u, Language lang, const std::string& entry_point) {
  return lang == Language::kJava && u.name == "main" && entry_point != "main";
}

}  // namespace

std::vector<CheckingUnit> sibling_units(const std::vector<CheckingUnit>& units, std::size_t self, Language lang,
                                        const std::string& entry_point,
                                        const std::function<bool(std::size_t)>& keep) {
  std::map<std::string, std::size_t> latest;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (i == self || units[i].name == units[self].name) continue;
    if (leaves_out(units[i], lang, entry_point) || !keep(i)) continue;
    latest[units[i].name] = i;
  }
  std::vector<std::size_t> picked;
  for (const auto& [name, i] : latest) picked.push_back(i);
  std::sort(picked.begin(), picked.end());
  std::vector<CheckingUnit> out;
  for (auto i : picked) out.push_back(units[i]);
  return out;
}

TriggerPolicy TriggerPolicy::default_for(Language lang) {
  return lang == Language::kPython ? end_of_line() : delimiter_set({"}", "\n"});
}

bool TriggerPolicy::fires(const TokenEvent& event) const {
  if (event.is_eos) return true;
  switch (kind) {
    case Kind::kEveryToken:
      return true;
    case Kind::kEndOfLine:
      return event.text.find('\n') != std::string::npos;
    case Kind::kDelimiterSet:
      return std::any_of(delimiters.begin(), delimiters.end(), [&](const std::string& d) {
        return !d.empty() && event.text.find(d) != std::string::npos;
      });
  }
  return true;
}

std::string_view to_string(TriggerPolicy::Kind kind) {
  switch (kind) {
    case TriggerPolicy::Kind::kEveryToken:
      return "token";
    case TriggerPolicy::Kind::kEndOfLine:
      return "line";
    case TriggerPolicy::Kind::kDelimiterSet:
      return "delims";
  }
  return "line";
}

TriggerPolicy parse_trigger(std::string_view name) {
  if (name == "token") return TriggerPolicy::every_token();
  if (name == "line") return TriggerPolicy::end_of_line();
  if (name == "delims") return TriggerPolicy::delimiter_set({"}", "\n"});
  throw ConfigurationError("unknown trigger policy '" + std::string(name) + "' (token|line|delims)");
}

TriggerPolicy SuppressionConfig::effective_trigger() const {
  return trigger_policy ? *trigger_policy : TriggerPolicy::default_for(object_language);
}

void SuppressionConfig::validate() const {
  if (max_output_tokens < 1) throw ConfigurationError("max_output_tokens must be at least 1");
  if (test_timeout <= Nanos::zero()) throw ConfigurationError("test_timeout must be positive");
  if (toolchain.check_timeout <= Nanos::zero()) throw ConfigurationError("check timeout must be positive");
  auto t = effective_trigger();
  if (t.kind == TriggerPolicy::Kind::kDelimiterSet) {
    if (t.delimiters.empty()) throw ConfigurationError("delimiter trigger needs at least one delimiter");
    for (const auto& d : t.delimiters) {
      if (d.empty()) throw ConfigurationError("empty trigger delimiter");
    }
  }
}

Toolchain SuppressionConfig::effective_toolchain() const {
  Toolchain tc = toolchain;
  for (const auto& d : dependencies) {
    if (std::find(tc.dependencies.begin(), tc.dependencies.end(), d) == tc.dependencies.end()) {
      tc.dependencies.push_back(d);
    }
  }
  return tc;
}

std::string_view to_string(SessionState state) {
  switch (state) {
    case SessionState::kRunning:
      return "running";
    case SessionState::kStoppedAccepted:
      return "accepted";
    case SessionState::kStoppedEos:
      return "eos";
    case SessionState::kStoppedExhausted:
      return "exhausted";
  }
  return "running";
}

std::string_view to_string(SessionTerminal t) {
  switch (t) {
    case SessionTerminal::kAccepted:
      return "accepted";
    case SessionTerminal::kEos:
      return "eos";
    case SessionTerminal::kExhausted:
      return "exhausted";
    case SessionTerminal::kError:
      return "error";
  }
  return "error";
}

std::vector<CheckingUnit> select_harness_units(const std::vector<CheckingUnit>& well_formed,
                                               std::size_t candidate, Language lang,
                                               const std::string& entry_point) {
  auto others = sibling_units(well_formed, candidate, lang, entry_point, [](std::size_t) { return true; });
  std::vector<CheckingUnit> out;
  bool placed = false;
  const auto& self = well_formed[candidate];
  for (auto& u : others) {
    if (!placed && self.span.begin < u.span.begin) {
      out.push_back(self);
      placed = true;
    }
    out.push_back(std::move(u));
  }
  if (!placed) out.push_back(self);
  return out;
}

Session::Session(std::string problem_id, TestSuite suite, SuppressionConfig config, Evaluator& evaluator)
    : problem_id_(std::move(problem_id)),
      suite_(std::move(suite)),
      config_(std::move(config)),
      trigger_(config_.effective_trigger()),
      evaluator_(evaluator) {
  config_.validate();
  if (suite_.language != config_.object_language) {
    throw ConfigurationError("test suite language does not match the session language");
  }
}

StopDecision Session::stop(SessionState state, StopDecision::Kind kind) {
  state_ = state;
  StopDecision d;
  d.kind = kind;
  if (acceptance_) {
    d.accepted_unit = acceptance_->unit;
    d.stop_index = acceptance_->stop_index;
  }
  return d;
}

StopDecision Session::on_token(const TokenEvent& event) {
  if (aborted_) throw ProtocolError(problem_id_ + ": session aborted");
  if (state_ != SessionState::kRunning) {
    throw ProtocolError(problem_id_ + ": token after the session stopped (" + std::string(to_string(state_)) + ")");
  }
  if (event.index != token_count()) {
    throw ProtocolError(problem_id_ + ": expected token index " + std::to_string(token_count()) + ", got " +
                        std::to_string(event.index));
  }
  if (event.is_eos && !event.text.empty()) throw ProtocolError(problem_id_ + ": EOS event with text");

  const auto t0 = Clock::now();
  try {
    if (event.is_eos) {
      StopDecision d = run_pipeline();
      if (d.kind == StopDecision::Kind::kStopAccepted) return d;
      return stop(SessionState::kStoppedEos, StopDecision::Kind::kStopEos);
    }

    text_ += event.text;
    token_ends_.push_back(text_.size());
    arrival_times_.push_back(event.arrival_time);
    StopDecision d;
    const bool fired = trigger_.fires(event);
    if (fired) d = run_pipeline();
    if (!d.stops() && token_count() >= config_.max_output_tokens) {
      // The cap ends generation like EOS does, so the text gets a final look.
      if (!fired) d = run_pipeline();
      if (!d.stops()) d = stop(SessionState::kStoppedExhausted, StopDecision::Kind::kStopExhausted);
    }
    token_latencies_.push_back(Clock::now() - t0);
    return d;
  } catch (const ConfigurationError&) {
    aborted_ = true;
    throw;
  }
}

StopDecision Session::finish() {
  if (aborted_) throw ProtocolError(problem_id_ + ": session aborted");
  if (state_ != SessionState::kRunning) throw ProtocolError(problem_id_ + ": session already stopped");
  try {
    StopDecision d = run_pipeline();
    if (d.stops()) return d;
    return stop(SessionState::kStoppedExhausted, StopDecision::Kind::kStopExhausted);
  } catch (const ConfigurationError&) {
    aborted_ = true;
    throw;
  }
}

Verdict Session::checked(const CheckingUnit& unit, const std::string& preamble,
                         std::span<const CheckingUnit> siblings) {
  std::string key = CheckCache::key(unit, preamble, siblings);
  if (const Verdict* v = check_cache_.find(key)) {
    ++counters_.check_cache_hits;
    return *v;
  }
  const auto t0 = Clock::now();
  Verdict v = evaluator_.check(unit, preamble, siblings);
  check_latencies_.push_back(Clock::now() - t0);
  ++counters_.wellformedness_checks;
  check_cache_.put(std::move(key), v);
  return v;
}

std::optional<TestOutcome::Kind> Session::tested(const Harness& harness, UnitRecord* rec) {
  auto it = test_memo_.find(harness.source);
  if (it != test_memo_.end()) {
    ++counters_.test_memo_hits;
    rec->test_memoized = true;
    return it->second;
  }
  const auto t0 = Clock::now();
  TestOutcome out = evaluator_.run(harness);
  test_latencies_.push_back(Clock::now() - t0);
  ++counters_.test_executions;
  test_memo_.emplace(harness.source, out.kind);
  return out.kind;
}

StopDecision Session::run_pipeline() {
  const auto t0 = Clock::now();
  ++counters_.triggers;
  const Language lang = config_.object_language;
  TriggerRecord log;
  log.token_count = token_count();

  Detection det = detect_complete_units(text_, lang);
  std::vector<CheckingUnit> units = candidate_units(det);
  const std::string preamble = extract_preamble(text_, lang);

  // Feasibility of each unit on its own.
  std::vector<std::optional<Verdict>> verdicts(units.size());
  log.units.resize(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    UnitRecord& r = log.units[i];
    r.name = units[i].name;
    r.canonical_text = units[i].canonical_text;
    if (discard_.contains(units[i].canonical_text)) {
      discard_.record_hit();
      ++counters_.discard_hits;
      r.discard_hit = true;
      continue;
    }
    Verdict v = checked(units[i], preamble, {});
    if (should_discard(v)) {
      discard_.insert(units[i].canonical_text);
      r.discarded = true;
    }
    r.verdict = v;
    verdicts[i] = std::move(v);
  }

  // Java: an unresolved call may be satisfied by another generated method.
  if (lang == Language::kJava) {
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (!verdicts[i] || verdicts[i]->kind != Verdict::Kind::kRecoverable) continue;
      auto siblings = sibling_units(units, i, lang, suite_.entry_point, [&](std::size_t j) {
        return verdicts[j] && verdicts[j]->kind != Verdict::Kind::kFatalMalformed;
      });
      if (siblings.empty()) continue;
      Verdict v = checked(units[i], preamble, siblings);
      log.units[i].verdict = v;
      verdicts[i] = std::move(v);
    }
  }

  std::vector<CheckingUnit> well_formed;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (verdicts[i] && verdicts[i]->is_well_formed()) {
      well_formed.push_back(units[i]);
      origin.push_back(i);
    }
  }

  StopDecision decision;
  for (std::size_t k = 0; k < well_formed.size(); ++k) {
    if (leaves_out(well_formed[k], lang, suite_.entry_point)) continue;
    auto selected = select_harness_units(well_formed, k, lang, suite_.entry_point);
    Harness harness;
    try {
      harness = assemble_harness(selected, preamble, suite_);
    } catch (const HarnessAssemblyError&) {
      continue;  // ambiguous without an entry point; nothing to run
    }
    UnitRecord& r = log.units[origin[k]];
    r.test = tested(harness, &r);
    if (*r.test != TestOutcome::Kind::kPassed) continue;

    Acceptance a;
    a.unit = well_formed[k];
    a.stop_index = token_count();
    a.preamble = preamble;
    a.harness_source = harness.source;
    const std::size_t raw_begin = det.source.to_raw(a.unit.span.begin);
    const std::size_t raw_end = det.source.to_raw(a.unit.span.end);
    auto first = std::upper_bound(token_ends_.begin(), token_ends_.end(), raw_begin);
    auto last = std::lower_bound(token_ends_.begin(), token_ends_.end(), raw_end);
    a.first_token = std::min<std::size_t>(first - token_ends_.begin(), token_ends_.empty() ? 0 : token_ends_.size() - 1);
    a.last_token = std::min<std::size_t>(last - token_ends_.begin(), token_ends_.empty() ? 0 : token_ends_.size() - 1);
    acceptance_ = std::move(a);
    decision = stop(SessionState::kStoppedAccepted, StopDecision::Kind::kStopAccepted);
    break;
  }

  bs_time_ += Clock::now() - t0;
  if (config_.record_triggers) trigger_log_.push_back(std::move(log));
  return decision;
}

SessionResult run_session(TokenSource& source, const ProblemBundle& problem, const SuppressionConfig& config,
                          Evaluator& evaluator) {
  const auto t0 = Clock::now();
  Session session(problem.id, problem.suite, config, evaluator);
  SessionResult result;
  result.problem_id = problem.id;

  StopDecision d;
  try {
    while (!d.stops()) {
      std::optional<TokenEvent> ev = source.next();
      if (!ev) {
        d = session.finish();
        break;
      }
      d = session.on_token(*ev);
    }
    if (d.kind == StopDecision::Kind::kStopAccepted || session.token_count() >= config.max_output_tokens) {
      source.cancel();
    }
  } catch (const SourceError& e) {
    result.terminal = SessionTerminal::kError;
    result.error = e.what();
  }

  if (result.error.empty()) {
    switch (d.kind) {
      case StopDecision::Kind::kStopAccepted:
        result.terminal = SessionTerminal::kAccepted;
        result.stop_index = d.stop_index;
        break;
      case StopDecision::Kind::kStopEos:
        result.terminal = SessionTerminal::kEos;
        break;
      default:
        result.terminal = SessionTerminal::kExhausted;
        break;
    }
  }
  result.tokens = session.token_count();
  result.text = session.text();
  result.acceptance = session.acceptance();
  result.counters = session.counters();
  result.discard_set_size = session.discard_set().size();
  result.bs_time = session.bs_time();
  result.token_latencies = session.token_latencies();
  result.check_latencies = session.check_latencies();
  result.test_latencies = session.test_latencies();
  result.trigger_log = session.trigger_log();
  result.wall_time = Clock::now() - t0;
  return result;
}

SessionResult run_session(TokenSource& source, const ProblemBundle& problem, const SuppressionConfig& config) {
  config.validate();
  RunOptions opts{config.test_timeout, config.timeout_scope};
  ToolchainEvaluator evaluator(config.effective_toolchain(), config.object_language, opts, problem.id);
  return run_session(source, problem, config, evaluator);
}

}  // namespace stopgen
