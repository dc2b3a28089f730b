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

#ifndef STOPGEN_TOOLCHAIN_HPP_
#define STOPGEN_TOOLCHAIN_HPP_

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "stopgen/common.hpp"
#include "stopgen/diagnostics.hpp"

namespace stopgen {

/// Object-language commands. Each command is an argv prefix; the checker
/// and runner append file arguments.
struct Toolchain {
  // Compile check: the unit source arrives on stdin.
  std::vector<std::string> python_check = {"python3", "-I", "-S"};
  // Harness execution: `<python_run...> harness.py`.
  std::vector<std::string> python_run = {"python3"};
  // `<javac...> -d <out> [-cp deps] Problem.java`
  std::vector<std::string> javac = {"javac", "-J-XX:TieredStopAtLevel=1", "-J-Xshare:auto"};
  // `<java...> -cp <out>[:deps] Problem`; assertions are enabled here.
  std::vector<std::string> java = {"java", "-ea", "-XX:TieredStopAtLevel=1", "-Xshare:auto"};

  std::filesystem::path work_dir = std::filesystem::temp_directory_path() / "stopgen";
  Nanos check_timeout = std::chrono::seconds(10);
  // Jars on the Java classpath, or import roots on PYTHONPATH. Provisioned
  // up front; nothing is fetched at run time.
  std::vector<std::string> dependencies;
  std::shared_ptr<const DiagnosticRules> rules;  // null: built-in table
  bool keep_attempts = true;  // keep attempt-n directories after a run

  const DiagnosticRules& diagnostic_rules() const {
    return rules ? *rules : DiagnosticRules::defaults();
  }
};

/// Throws ConfigurationError unless every program `lang` needs resolves.
void verify_toolchain(const Toolchain& tc, Language lang);

}  // namespace stopgen

#endif  // STOPGEN_TOOLCHAIN_HPP_
