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


// Suppression settings from a JSON file. Every key is optional:
//
//   {
//     "trigger": "token" | "line" | "delims" | {"delimiters": ["}", "\n"]},
//     "max_output_tokens": 1000,
//     "test_timeout_s": 10,
//     "timeout_scope": "harness" | "per_case",
//     "dependencies": ["/opt/deps/lib.jar"],
//     "record_triggers": false,
//     "toolchain": {
//       "python_check": [...], "python_run": [...], "javac": [...], "java": [...],
//       "work_dir": "/tmp/stopgen", "check_timeout_s": 10,
//       "keep_attempts": true, "diagnostic_rules": "rules.txt"
//     }
//   }
//
// Unknown keys are errors.

#ifndef STOPGEN_CONFIG_HPP_
#define STOPGEN_CONFIG_HPP_

#include <filesystem>
#include <string>

#include "stopgen/session.hpp"

namespace stopgen {

/// Throws ConfigurationError. Relative paths resolve against `base_dir`.
SuppressionConfig parse_suppression_config(const std::string& json_text, const std::string& origin = "<config>",
                                           const std::filesystem::path& base_dir = {});
SuppressionConfig load_suppression_config(const std::filesystem::path& path);

std::string serialize_suppression_config(const SuppressionConfig& config);

}  // namespace stopgen

#endif  // STOPGEN_CONFIG_HPP_
