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

// Toolchain diagnostic parsing and table-driven classification.
//
// Rule files hold one rule per line, `<language> <regex> <category>`, where
// the regex is everything between the first and last whitespace-separated
// fields. The first matching rule wins; unmatched diagnostics are Other.
// Blank lines and lines starting with '#' are ignored.

#ifndef STOPGEN_DIAGNOSTICS_HPP_
#define STOPGEN_DIAGNOSTICS_HPP_

#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "stopgen/common.hpp"

namespace stopgen {

enum class DiagnosticCategory { kSyntaxError, kTypeError, kUnresolvedIdentifier, kOther };

std::string_view to_string(DiagnosticCategory c);
DiagnosticCategory parse_category(std::string_view name);

/// Syntax and type errors cannot be repaired by generating more tokens.
inline bool is_fatal(DiagnosticCategory c) {
  return c == DiagnosticCategory::kSyntaxError || c == DiagnosticCategory::kTypeError;
}

struct Diagnostic {
  DiagnosticCategory category = DiagnosticCategory::kOther;
  std::string raw_message;
  std::optional<int> line;
  std::optional<int> column;
};

class DiagnosticRules {
 public:
  /// The built-in table (same content as data/config/diagnostic_rules.txt).
  static const DiagnosticRules& defaults();
  static std::string_view default_table();

  /// Throws ParseError naming `origin` and the 1-based line on bad input.
  static DiagnosticRules parse(std::string_view table, std::string_view origin = "<rules>");
  static DiagnosticRules load(const std::filesystem::path& path);

  DiagnosticCategory classify(std::string_view raw, Language lang) const;
  std::size_t size() const { return rules_.size(); }

 private:
  struct Rule {
    Language language;
    std::string pattern;
    std::regex regex;
    DiagnosticCategory category;
  };
  std::vector<Rule> rules_;
};

/// Classifies one raw diagnostic record.
Diagnostic classify_diagnostic(std::string_view raw, Language lang,
                               const DiagnosticRules& rules = DiagnosticRules::defaults());

/// Splits javac stderr into error records (warnings and notes dropped) and
/// classifies each. `file_name` filters records to that source file.
std::vector<Diagnostic> parse_javac_errors(std::string_view output, std::string_view file_name,
                                           const DiagnosticRules& rules);

}  // namespace stopgen

#endif  // STOPGEN_DIAGNOSTICS_HPP_
