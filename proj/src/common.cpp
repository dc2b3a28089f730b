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

#include "stopgen/common.hpp"

namespace stopgen {

std::string_view to_string(Language lang) {
  return lang == Language::kPython ? "python" : "java";
}

Language parse_language(std::string_view name) {
  if (name == "python") return Language::kPython;
  if (name == "java") return Language::kJava;
  throw ParseError("unknown language '" + std::string(name) +
                   "' (expected python or java)");
}

}  // namespace stopgen
