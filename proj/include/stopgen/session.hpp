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

// One generation session: token events in, stop decision out.
//
// At every trigger point the accumulated text goes through three filters:
//   plausible   detect_complete_units (plus the open Python unit)
//   feasible    check_wellformedness, fatal units go to the discard set
//   acceptable  assemble_harness + run_tests
// The first unit, oldest first, that passes all tests stops the session.

#ifndef STOPGEN_SESSION_HPP_
#define STOPGEN_SESSION_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stopgen/common.hpp"
#include "stopgen/evaluator.hpp"
#include "stopgen/problem.hpp"
#include "stopgen/test_runner.hpp"
#include "stopgen/toolchain.hpp"
#include "stopgen/unit_detector.hpp"
#include "stopgen/wellformedness.hpp"

namespace stopgen {

struct TokenEvent {
  std::size_t index = 0;
  std::string text;
  bool is_eos = false;  // carries no text; always last
  Clock::time_point arrival_time{};
};

struct TriggerPolicy {
  enum class Kind { kEveryToken, kEndOfLine, kDelimiterSet };

  Kind kind = Kind::kEndOfLine;
  std::vector<std::string> delimiters;  // kDelimiterSet only

  static TriggerPolicy every_token() { return {Kind::kEveryToken, {}}; }
  static TriggerPolicy end_of_line() { return {Kind::kEndOfLine, {}}; }
  static TriggerPolicy delimiter_set(std::vector<std::string> d) { return {Kind::kDelimiterSet, std::move(d)}; }
  /// Python: end of line. Java: {"}", "\n"}.
  static TriggerPolicy default_for(Language lang);

  /// EOS always fires.
  bool fires(const TokenEvent& event) const;
};

std::string_view to_string(TriggerPolicy::Kind kind);
/// "token" | "line" | "delims" (the latter is {"}", "\n"}).
TriggerPolicy parse_trigger(std::string_view name);

struct SuppressionConfig {
  std::optional<TriggerPolicy> trigger_policy;  // unset: TriggerPolicy::default_for
  std::size_t max_output_tokens = 1000;
  Nanos test_timeout = std::chrono::seconds(10);
  TimeoutScope timeout_scope = TimeoutScope::kHarness;
  Language object_language = Language::kPython;
  Toolchain toolchain;
  std::vector<std::string> dependencies;  // added to the toolchain's
  bool record_triggers = false;           // keep a TriggerRecord per trigger

  TriggerPolicy effective_trigger() const;
  /// Throws ConfigurationError.
  void validate() const;
  /// Toolchain with `dependencies` merged in.
  Toolchain effective_toolchain() const;
};

enum class SessionState { kRunning, kStoppedAccepted, kStoppedEos, kStoppedExhausted };

std::string_view to_string(SessionState state);

struct StopDecision {
  enum class Kind { kContinue, kStopAccepted, kStopEos, kStopExhausted };

  Kind kind = Kind::kContinue;
  std::optional<CheckingUnit> accepted_unit;
  std::size_t stop_index = 0;  // kStopAccepted: token_count at acceptance

  bool stops() const { return kind != Kind::kContinue; }
};

struct SessionCounters {
  std::size_t wellformedness_checks = 0;  // real checker invocations
  std::size_t test_executions = 0;        // real harness runs
  std::size_t discard_hits = 0;
  std::size_t triggers = 0;
  std::size_t check_cache_hits = 0;
  std::size_t test_memo_hits = 0;
};

/// What happened to one unit at one trigger point.
struct UnitRecord {
  std::string name;
  std::string canonical_text;
  bool discard_hit = false;  // skipped: already in the discard set
  std::optional<Verdict> verdict;
  bool discarded = false;  // inserted into the discard set here
  std::optional<TestOutcome::Kind> test;
  bool test_memoized = false;
};

struct TriggerRecord {
  std::size_t token_count = 0;
  std::vector<UnitRecord> units;
};

struct Acceptance {
  CheckingUnit unit;
  std::size_t stop_index = 0;
  std::string preamble;
  std::string harness_source;
  // Tokens overlapping the unit's text, inclusive.
  std::size_t first_token = 0;
  std::size_t last_token = 0;
};

class Session {
 public:
  /// `evaluator` must outlive the session.
  Session(std::string problem_id, TestSuite suite, SuppressionConfig config, Evaluator& evaluator);

  /// Throws ProtocolError on an index gap or once the session has stopped.
  /// A ConfigurationError from the toolchain aborts the session and is
  /// rethrown; later calls throw ProtocolError.
  StopDecision on_token(const TokenEvent& event);

  /// The source ended without EOS (a cap-terminated trace shorter than the
  /// cap). Runs a final pass and stops as accepted or exhausted.
  StopDecision finish();

  const std::string& problem_id() const { return problem_id_; }
  SessionState state() const { return state_; }
  bool aborted() const { return aborted_; }
  const std::string& text() const { return text_; }
  std::size_t token_count() const { return token_ends_.size(); }
  const SessionCounters& counters() const { return counters_; }
  const DiscardSet& discard_set() const { return discard_; }
  Nanos bs_time() const { return bs_time_; }
  const std::optional<Acceptance>& acceptance() const { return acceptance_; }
  const std::vector<Nanos>& check_latencies() const { return check_latencies_; }
  const std::vector<Nanos>& test_latencies() const { return test_latencies_; }
  // Time spent inside on_token, per consumed (non-EOS) event.
  const std::vector<Nanos>& token_latencies() const { return token_latencies_; }
  const std::vector<Clock::time_point>& arrival_times() const { return arrival_times_; }
  const std::vector<TriggerRecord>& trigger_log() const { return trigger_log_; }
  const SuppressionConfig& config() const { return config_; }

 private:
  StopDecision run_pipeline();
  Verdict checked(const CheckingUnit& unit, const std::string& preamble,
                  std::span<const CheckingUnit> siblings);
  std::optional<TestOutcome::Kind> tested(const Harness& harness, UnitRecord* rec);
  StopDecision stop(SessionState state, StopDecision::Kind kind);

  std::string problem_id_;
  TestSuite suite_;
  SuppressionConfig config_;
  TriggerPolicy trigger_;
  Evaluator& evaluator_;

  SessionState state_ = SessionState::kRunning;
  bool aborted_ = false;
  std::string text_;
  std::vector<std::size_t> token_ends_;  // raw offset after each token
  DiscardSet discard_;
  CheckCache check_cache_;
  std::map<std::string, TestOutcome::Kind> test_memo_;
  SessionCounters counters_;
  Nanos bs_time_{};
  std::optional<Acceptance> acceptance_;
  std::vector<Nanos> check_latencies_;
  std::vector<Nanos> test_latencies_;
  std::vector<Nanos> token_latencies_;
  std::vector<Clock::time_point> arrival_times_;
  std::vector<TriggerRecord> trigger_log_;
};

/// Units the harness for `candidate` is built from: the candidate itself plus
/// the latest well-formed unit of every other name, in textual order. Java
/// units named `main` are left out unless `main` is the entry point.
std::vector<CheckingUnit> select_harness_units(const std::vector<CheckingUnit>& well_formed,
                                               std::size_t candidate, Language lang,
                                               const std::string& entry_point);

/// The latest unit of every name other than units[self]'s among those
/// `keep` accepts, in textual order. Java `main` units are left out unless
/// `main` is the entry point. Used as compile context for units[self].
std::vector<CheckingUnit> sibling_units(const std::vector<CheckingUnit>& units, std::size_t self, Language lang,
                                        const std::string& entry_point,
                                        const std::function<bool(std::size_t)>& keep);

/// Yields token events; consumed by exactly one session.
class TokenSource {
 public:
  virtual ~TokenSource() = default;
  /// Next event, or nullopt when the source ends without EOS. Throws
  /// SourceError on failure.
  virtual std::optional<TokenEvent> next() = 0;
  /// Stops upstream generation; later next() calls return nullopt.
  virtual void cancel() {}
};

enum class SessionTerminal { kAccepted, kEos, kExhausted, kError };

std::string_view to_string(SessionTerminal t);

struct SessionResult {
  std::string problem_id;
  SessionTerminal terminal = SessionTerminal::kError;
  std::string error;                     // kError only
  std::optional<std::size_t> stop_index;  // kAccepted
  std::size_t tokens = 0;                 // tokens consumed
  std::string text;                       // accumulated text at the stop point
  std::optional<Acceptance> acceptance;
  SessionCounters counters;
  std::size_t discard_set_size = 0;
  Nanos bs_time{};
  Nanos wall_time{};
  std::vector<Nanos> token_latencies;
  std::vector<Nanos> check_latencies;
  std::vector<Nanos> test_latencies;
  std::vector<TriggerRecord> trigger_log;
};

/// Drives `source` through a session until it stops. Source failures yield
/// kError with the metrics gathered so far; ConfigurationError propagates.
SessionResult run_session(TokenSource& source, const ProblemBundle& problem,
                          const SuppressionConfig& config, Evaluator& evaluator);

/// Same, with a ToolchainEvaluator built from `config`.
SessionResult run_session(TokenSource& source, const ProblemBundle& problem,
                          const SuppressionConfig& config);

}  // namespace stopgen

#endif  // STOPGEN_SESSION_HPP_
