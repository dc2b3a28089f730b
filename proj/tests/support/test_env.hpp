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


// Shared helpers for the unit and acceptance tests.

#ifndef STOPGEN_TESTS_TEST_ENV_HPP_
#define STOPGEN_TESTS_TEST_ENV_HPP_

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stopgen/bench.hpp"
#include "stopgen/evaluator.hpp"
#include "stopgen/toolchain.hpp"

namespace stopgen_test {

using namespace stopgen;

std::filesystem::path data_dir();

/// A fresh directory under the system temp dir.
std::filesystem::path temp_dir(std::string_view tag);

/// Default commands, scratch under a temp dir, attempts not kept.
Toolchain test_toolchain();

bool have_python();
bool have_java();

/// data/bundles/<language>
Corpus bundles(Language lang);
/// Both languages.
Corpus all_bundles();

/// Events for `tokens`, indexed from 0, optionally followed by EOS.
std::vector<TokenEvent> events(const std::vector<std::string>& tokens, bool eos = false);

Diagnostic diag(DiagnosticCategory c, std::string msg = "scripted");
TestOutcome outcome(TestOutcome::Kind kind);

/// Canned answers, with a record of every question asked.
class ScriptedEvaluator : public Evaluator {
 public:
  using CheckFn = std::function<Verdict(const CheckingUnit&, std::string_view, std::span<const CheckingUnit>)>;
  using RunFn = std::function<TestOutcome(const Harness&)>;

  // Defaults: every unit is well-formed, every harness fails.
  CheckFn on_check;
  RunFn on_run;

  std::vector<std::string> checked;  // canonical texts, in call order
  std::vector<std::string> ran;      // harness sources

  Verdict check(const CheckingUnit& unit, std::string_view preamble,
                std::span<const CheckingUnit> siblings) override {
    checked.push_back(unit.canonical_text);
    return on_check ? on_check(unit, preamble, siblings) : Verdict::well_formed();
  }
  TestOutcome run(const Harness& harness) override {
    ran.push_back(harness.source);
    return on_run ? on_run(harness) : outcome(TestOutcome::Kind::kFailed);
  }
};

}  // namespace stopgen_test

#endif  // STOPGEN_TESTS_TEST_ENV_HPP_
