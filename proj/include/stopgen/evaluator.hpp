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

// The two expensive questions a session asks, behind one seam so tests can
// substitute canned answers.

#ifndef STOPGEN_EVALUATOR_HPP_
#define STOPGEN_EVALUATOR_HPP_

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "stopgen/test_runner.hpp"
#include "stopgen/toolchain.hpp"
#include "stopgen/wellformedness.hpp"

namespace stopgen {

class Evaluator {
 public:
  virtual ~Evaluator() = default;

  virtual Verdict check(const CheckingUnit& unit, std::string_view preamble,
                        std::span<const CheckingUnit> siblings) = 0;
  virtual TestOutcome run(const Harness& harness) = 0;
};

/// Runs the real checker and harness in `<work_dir>/<session-id>/`.
class ToolchainEvaluator : public Evaluator {
 public:
  /// Throws ConfigurationError if `lang`'s toolchain does not resolve.
  ToolchainEvaluator(Toolchain tc, Language lang, RunOptions options, std::string_view session_hint);

  Verdict check(const CheckingUnit& unit, std::string_view preamble,
                std::span<const CheckingUnit> siblings) override;
  TestOutcome run(const Harness& harness) override;

  const ScratchArea& scratch() const { return scratch_; }

 private:
  Toolchain tc_;
  RunOptions options_;
  ScratchArea scratch_;
};

}  // namespace stopgen

#endif  // STOPGEN_EVALUATOR_HPP_
