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

#include "stopgen/evaluator.hpp"

namespace stopgen {

ToolchainEvaluator::ToolchainEvaluator(Toolchain tc, Language lang, RunOptions options,
                                       std::string_view session_hint)
    : tc_(std::move(tc)), options_(options), scratch_(tc_.work_dir, make_session_id(session_hint)) {
  verify_toolchain(tc_, lang);
}

Verdict ToolchainEvaluator::check(const CheckingUnit& unit, std::string_view preamble,
                                  std::span<const CheckingUnit> siblings) {
  return check_wellformedness(unit, preamble, tc_, scratch_, siblings);
}

TestOutcome ToolchainEvaluator::run(const Harness& harness) { return run_tests(harness, options_, tc_, scratch_); }

}  // namespace stopgen
