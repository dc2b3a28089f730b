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

#include "stopgen/diagnostics.hpp"

#include <fstream>
#include <sstream>

namespace stopgen {
namespace {

// Keep in sync with data/config/diagnostic_rules.txt (a unit test checks).
constexpr std::string_view kDefaultTable =
    R"(# language  regex  category
# Checked against javac 11. First match wins; anything unmatched is Other.
java cannot find symbol UnresolvedIdentifier
java package \S+ does not exist UnresolvedIdentifier
java incompatible types TypeError
java bad operand types? TypeError
java incomparable types TypeError
java possible lossy conversion TypeError
java cannot be dereferenced TypeError
java array required, but TypeError
java unexpected type TypeError
java illegal start of SyntaxError
java not a statement SyntaxError
java unclosed SyntaxError
java reached end of file while parsing SyntaxError
java orphaned SyntaxError
java 'else' without 'if' SyntaxError
java illegal character SyntaxError
java illegal line end SyntaxError
java empty character literal SyntaxError
java malformed SyntaxError
java error: .*expected$ SyntaxError
# compile() only raises syntax-class errors
python .* SyntaxError
)";

std::string_view first_line(std::string_view s) { return s.substr(0, s.find('\n')); }

std::string_view trim_ws(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view to_string(DiagnosticCategory c) {
  switch (c) {
    case DiagnosticCategory::kSyntaxError:
      return "SyntaxError";
    case DiagnosticCategory::kTypeError:
      return "TypeError";
    case DiagnosticCategory::kUnresolvedIdentifier:
      return "UnresolvedIdentifier";
    case DiagnosticCategory::kOther:
      return "Other";
  }
  return "Other";
}

DiagnosticCategory parse_category(std::string_view name) {
  for (auto c : {DiagnosticCategory::kSyntaxError, DiagnosticCategory::kTypeError,
                 DiagnosticCategory::kUnresolvedIdentifier, DiagnosticCategory::kOther}) {
    if (to_string(c) == name) return c;
  }
  throw ParseError("unknown diagnostic category '" + std::string(name) + "'");
}

const DiagnosticRules& DiagnosticRules::defaults() {
  static const DiagnosticRules rules = parse(kDefaultTable, "<built-in rules>");
  return rules;
}

std::string_view DiagnosticRules::default_table() { return kDefaultTable; }

DiagnosticRules DiagnosticRules::parse(std::string_view table, std::string_view origin) {
  DiagnosticRules out;
  std::size_t line_no = 0;
  while (!table.empty()) {
    ++line_no;
    std::size_t nl = table.find('\n');
    std::string_view line = trim_ws(table.substr(0, nl));
    table.remove_prefix(nl == std::string_view::npos ? table.size() : nl + 1);
    if (line.empty() || line.front() == '#') continue;

    auto fail = [&](const std::string& why) {
      return ParseError(std::string(origin) + ":" + std::to_string(line_no) + ": " + why);
    };
    std::size_t first_ws = line.find_first_of(" \t");
    std::size_t last_ws = line.find_last_of(" \t");
    if (first_ws == std::string_view::npos || first_ws == last_ws) {
      throw fail("expected '<language> <regex> <category>'");
    }
    std::string_view pattern = trim_ws(line.substr(first_ws, last_ws - first_ws));
    if (pattern.empty()) throw fail("empty regex");
    Rule rule;
    try {
      rule.language = parse_language(line.substr(0, first_ws));
      rule.category = parse_category(line.substr(last_ws + 1));
    } catch (const ParseError& e) {
      throw fail(e.what());
    }
    rule.pattern = std::string(pattern);
    try {
      rule.regex = std::regex(rule.pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw fail(std::string("bad regex: ") + e.what());
    }
    out.rules_.push_back(std::move(rule));
  }
  return out;
}

DiagnosticRules DiagnosticRules::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read diagnostic rules: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

DiagnosticCategory DiagnosticRules::classify(std::string_view raw, Language lang) const {
  std::string_view head = first_line(raw);
  for (const auto& r : rules_) {
    if (r.language != lang) continue;
    if (std::regex_search(head.begin(), head.end(), r.regex)) return r.category;
  }
  return DiagnosticCategory::kOther;
}

Diagnostic classify_diagnostic(std::string_view raw, Language lang, const DiagnosticRules& rules) {
  Diagnostic d;
  d.raw_message = std::string(raw);
  d.category = rules.classify(raw, lang);
  return d;
}

std::vector<Diagnostic> parse_javac_errors(std::string_view output, std::string_view file_name,
                                           const DiagnosticRules& rules) {
  static const std::regex header(R"(^(.*\.java):(\d+): (error|warning): )");
  struct Record {
    std::string text;
    bool error = false;
    bool ours = false;
    int line = 0;
  };
  std::vector<Record> records;
  std::istringstream in{std::string(output)};
  std::string line;
  while (std::getline(in, line)) {
    std::smatch m;
    if (std::regex_search(line, m, header)) {
      Record r;
      r.text = line;
      r.error = m[3] == "error";
      std::string file = m[1].str();
      r.ours = file_name.empty() || file == file_name || file.ends_with("/" + std::string(file_name));
      r.line = std::stoi(m[2].str());
      records.push_back(std::move(r));
    } else if (!records.empty()) {
      // "N errors" trailers are not part of any record.
      if (std::regex_match(line, std::regex(R"(\d+ (errors?|warnings?))"))) continue;
      records.back().text += '\n';
      records.back().text += line;
    }
  }
  std::vector<Diagnostic> out;
  for (const auto& r : records) {
    if (!r.error || !r.ours) continue;
    Diagnostic d = classify_diagnostic(r.text, Language::kJava, rules);
    d.line = r.line;
    // The caret line marks the column.
    std::istringstream rec(r.text);
    std::string l;
    while (std::getline(rec, l)) {
      std::size_t caret = l.find('^');
      if (caret != std::string::npos && l.find_first_not_of(" \t^") == std::string::npos) {
        d.column = static_cast<int>(caret) + 1;
        break;
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace stopgen
