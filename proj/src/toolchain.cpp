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

#include "stopgen/toolchain.hpp"

#include "stopgen/process.hpp"

namespace stopgen {

void verify_toolchain(const Toolchain& tc, Language lang) {
  auto need = [](const std::vector<std::string>& cmd, const char* what) {
    if (cmd.empty()) throw ConfigurationError(std::string("no command configured for ") + what);
    if (!find_program(cmd.front())) {
      throw ConfigurationError(std::string(what) + " not found or not executable: " + cmd.front());
    }
  };
  if (lang == Language::kPython) {
    need(tc.python_check, "python checker");
    need(tc.python_run, "python runtime");
  } else {
    need(tc.javac, "java compiler");
    need(tc.java, "java runtime");
  }
  if (tc.check_timeout <= Nanos::zero()) throw ConfigurationError("check timeout must be positive");
}

}  // namespace stopgen
