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

#include "stopgen/wellformedness.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "stopgen/test_runner.hpp"

namespace stopgen {
namespace {

// Reads the program from stdin. Only syntax-class failures are reported as
// diagnostics (exit 1); anything else is a checker malfunction.
constexpr const char* kPythonCompileScript =
    "import sys\n"
    "src = sys.stdin.read()\n"
    "try:\n"
    "    compile(src, '<unit>', 'exec', dont_inherit=True)\n"
    "except (SyntaxError, ValueError) as e:\n"
    "    msg = getattr(e, 'msg', None) or str(e)\n"
    "    print(type(e).__name__ + ': ' + msg)\n"
    "    print(getattr(e, 'lineno', 0) or 0, getattr(e, 'offset', 0) or 0)\n"
    "    sys.exit(1)\n";

int count_lines(std::string_view s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

Diagnostic other(std::string raw) {
  Diagnostic d;
  d.category = DiagnosticCategory::kOther;
  d.raw_message = std::move(raw);
  return d;
}

Diagnostic timed_out_diagnostic(Nanos limit) {
  return other("checker timed out after " +
               std::to_string(std::chrono::duration_cast<std::chrono::milliseconds>(limit).count()) + " ms");
}

Verdict check_python(const CheckingUnit& unit, std::string_view preamble, const Toolchain& tc) {
  std::string prefix;
  if (!preamble.empty()) {
    prefix = std::string(preamble);
    if (prefix.back() != '\n') prefix += '\n';
  }
  const int preamble_lines = count_lines(prefix);

  ProcessSpec spec;
  spec.argv = tc.python_check;
  spec.argv.insert(spec.argv.end(), {"-c", kPythonCompileScript});
  spec.stdin_data = prefix + unit.canonical_text + "\n";
  spec.timeout = tc.check_timeout;
  spec.env_overrides = {"PYTHONDONTWRITEBYTECODE=1"};
  ProcessResult r = run_process(spec);
  if (r.timed_out) return Verdict::recoverable(timed_out_diagnostic(tc.check_timeout));
  if (r.success()) return Verdict::well_formed();
  if (r.exit_code != 1 || r.term_signal != 0) {
    return Verdict::recoverable(other("checker failed: " + r.err.substr(0, 2000)));
  }

  std::istringstream in(r.out);
  std::string message, position;
  std::getline(in, message);
  std::getline(in, position);
  Diagnostic d = classify_diagnostic(message, Language::kPython, tc.diagnostic_rules());
  int line = 0, column = 0;
  std::istringstream(position) >> line >> column;
  if (line > 0 && line <= preamble_lines) {
    // A broken import line is not the unit's fault.
    d.line = line;
    return Verdict::recoverable(std::move(d));
  }
  if (line > 0) d.line = line - preamble_lines;
  if (column > 0) d.column = column;
  return is_fatal(d.category) ? Verdict::fatal(std::move(d)) : Verdict::recoverable(std::move(d));
}

Verdict check_java(const CheckingUnit& unit, std::string_view preamble, const Toolchain& tc,
                   ScratchArea& scratch, std::span<const CheckingUnit> siblings) {
  std::vector<const CheckingUnit*> members{&unit};
  for (const auto& s : siblings) members.push_back(&s);
  std::stable_sort(members.begin(), members.end(),
                   [](const CheckingUnit* a, const CheckingUnit* b) { return a->span.begin < b->span.begin; });

  ProblemClassWriter w(preamble);
  LineRange unit_lines;
  std::vector<LineRange> sibling_lines;
  bool has_main = false;
  for (const auto* m : members) {
    LineRange r = w.add_member(m->canonical_text);
    if (m == &unit) {
      unit_lines = r;
    } else {
      sibling_lines.push_back(r);
    }
    has_main = has_main || m->name == "main";
  }
  if (!has_main) w.open_main();
  const std::string source = w.finish();

  const auto dir = scratch.next_check();
  {
    std::ofstream f(dir / "Problem.java", std::ios::binary);
    f << source;
    if (!f) throw Error("cannot write " + (dir / "Problem.java").string());
  }
  ProcessSpec spec;
  spec.argv = tc.javac;
  spec.argv.insert(spec.argv.end(), {"-d", "classes", "-nowarn", "-proc:none", "-Xmaxerrs", "1000"});
  if (!tc.dependencies.empty()) {
    std::string cp;
    for (const auto& d : tc.dependencies) cp += (cp.empty() ? "" : ":") + d;
    spec.argv.insert(spec.argv.end(), {"-cp", cp});
  }
  spec.argv.push_back("Problem.java");
  spec.cwd = dir;
  spec.timeout = tc.check_timeout;
  ProcessResult r = run_process(spec);
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);

  if (r.timed_out) return Verdict::recoverable(timed_out_diagnostic(tc.check_timeout));
  if (r.success()) return Verdict::well_formed();

  const std::string output = r.err + r.out;
  std::vector<Diagnostic> own, on_imports;
  bool any_parsed = false;
  for (auto& d : parse_javac_errors(output, "Problem.java", tc.diagnostic_rules())) {
    any_parsed = true;
    const int line = d.line.value_or(0);
    if (w.import_lines().first > 0 && w.import_lines().contains(line)) {
      on_imports.push_back(std::move(d));
      continue;
    }
    if (std::any_of(sibling_lines.begin(), sibling_lines.end(), [&](const LineRange& s) { return s.contains(line); })) {
      continue;
    }
    if (unit_lines.contains(line)) d.line = line - unit_lines.first + 1;
    own.push_back(std::move(d));
  }
  if (!any_parsed) return Verdict::recoverable(other(output.substr(0, 2000)));

  // Syntax errors outrank type errors; javac may not attribute at all then.
  for (auto category : {DiagnosticCategory::kSyntaxError, DiagnosticCategory::kTypeError}) {
    for (auto& d : own) {
      if (d.category == category) return Verdict::fatal(std::move(d));
    }
  }
  for (auto& d : own) {
    if (d.category == DiagnosticCategory::kUnresolvedIdentifier) return Verdict::recoverable(std::move(d));
  }
  if (!own.empty()) return Verdict::recoverable(std::move(own.front()));
  if (!on_imports.empty()) return Verdict::recoverable(std::move(on_imports.front()));
  return Verdict::well_formed();  // every error belonged to a sibling
}

}  // namespace

std::string_view to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::kWellFormed:
      return "WellFormed";
    case Verdict::Kind::kFatalMalformed:
      return "FatalMalformed";
    case Verdict::Kind::kRecoverable:
      return "Recoverable";
  }
  return "Recoverable";
}

bool should_discard(const Verdict& verdict) { return verdict.kind == Verdict::Kind::kFatalMalformed; }

bool DiscardSet::contains(std::string_view canonical) const {
  return set_.find(std::string(canonical)) != set_.end();
}

void DiscardSet::insert(std::string_view canonical) { set_.emplace(canonical); }

Verdict check_wellformedness(const CheckingUnit& unit, std::string_view preamble, const Toolchain& tc,
                             ScratchArea& scratch, std::span<const CheckingUnit> siblings) {
  if (unit.language == Language::kPython) return check_python(unit, preamble, tc);
  return check_java(unit, preamble, tc, scratch, siblings);
}

std::string CheckCache::key(const CheckingUnit& unit, std::string_view preamble,
                            std::span<const CheckingUnit> siblings) {
  std::string k = unit.canonical_text;
  k += '\x1f';
  k += preamble;
  for (const auto& s : siblings) {
    k += '\x1e';
    k += s.canonical_text;
  }
  return k;
}

const Verdict* CheckCache::find(const std::string& key) const {
  auto it = map_.find(key);
  return it == map_.end() ? nullptr : &it->second;
}

}  // namespace stopgen
