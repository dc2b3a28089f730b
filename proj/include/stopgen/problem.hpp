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

// Problem bundles: one JSON file per problem.
//
//   {"id": "...", "language": "python", "prompt": "...",
//    "entry_point": "square", "tests": ["assert square(3) == 9"],
//    "dependencies": [], "canonical_solution": "def square(x): ..."}

#ifndef STOPGEN_PROBLEM_HPP_
#define STOPGEN_PROBLEM_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stopgen/common.hpp"
#include "stopgen/test_runner.hpp"

namespace stopgen {

struct ProblemBundle {
  std::string id;
  Language language = Language::kPython;
  std::string prompt;  // description plus the function signature
  TestSuite suite;
  std::optional<std::string> canonical_solution;

  /// Throws ParseError if the suite is empty or the entry point does not
  /// occur in the prompt.
  void validate() const;
};

ProblemBundle parse_problem(const std::string& json_text, const std::string& origin = "<bundle>");
ProblemBundle load_problem(const std::filesystem::path& path);
std::string serialize_problem(const ProblemBundle& problem);

/// Every *.json file under `dir` (recursively), keyed by id. Duplicate ids
/// are a ParseError.
std::map<std::string, ProblemBundle> load_corpus(const std::filesystem::path& dir);

}  // namespace stopgen

#endif  // STOPGEN_PROBLEM_HPP_
