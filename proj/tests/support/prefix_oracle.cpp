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


#include "prefix_oracle.hpp"

#include <algorithm>

#include "stopgen/unit_detector.hpp"

namespace stopgen_test {
namespace {

bool excluded_main(const CheckingUnit& u, const ProblemBundle& p) {
  return p.language == Language::kJava && u.name == "main" && p.suite.entry_point != "main";
}

// Newest unit per name, skipping `skip_name`, in textual order.
std::vector<CheckingUnit> newest_per_name(const std::vector<const CheckingUnit*>& pool, const std::string& skip_name,
                                          const ProblemBundle& p) {
  std::map<std::string, const CheckingUnit*> newest;
  for (const CheckingUnit* u : pool) {
    if (u->name == skip_name || excluded_main(*u, p)) continue;
    auto& slot = newest[u->name];
    if (!slot || slot->span.begin < u->span.begin) slot = u;
  }
  std::vector<CheckingUnit> out;
  for (const auto& [name, u] : newest) out.push_back(*u);
  std::sort(out.begin(), out.end(),
            [](const CheckingUnit& a, const CheckingUnit& b) { return a.span.begin < b.span.begin; });
  return out;
}

}  // namespace

PrefixOracle::PrefixOracle(const ProblemBundle& problem, Toolchain tc, RunOptions options)
    : problem_(problem),
      tc_(std::move(tc)),
      options_(options),
      scratch_(tc_.work_dir, make_session_id("oracle-" + problem.id)) {
  for (const auto& d : problem_.suite.dependencies) tc_.dependencies.push_back(d);
}

Verdict PrefixOracle::verdict(const CheckingUnit& unit, const std::string& preamble,
                              const std::vector<CheckingUnit>& ctx) {
  std::string key = unit.canonical_text;
  key += '\0';
  key += preamble;
  for (const auto& c : ctx) {
    key += '\0';
    key += c.canonical_text;
  }
  auto it = verdicts_.find(key);
  if (it != verdicts_.end()) return it->second;
  ++checker_runs_;
  Verdict v = check_wellformedness(unit, preamble, tc_, scratch_, ctx);
  verdicts_.emplace(std::move(key), v);
  return v;
}

bool PrefixOracle::passes(const Harness& harness) {
  auto it = results_.find(harness.source);
  if (it != results_.end()) return it->second;
  ++harness_runs_;
  const bool ok = run_tests(harness, options_, tc_, scratch_).passed();
  results_.emplace(harness.source, ok);
  return ok;
}

std::optional<CheckingUnit> PrefixOracle::acceptable_unit(const std::string& text) {
  const Language lang = problem_.language;
  const Detection det = detect_complete_units(text, lang);
  const std::vector<CheckingUnit> units = candidate_units(det);
  const std::string preamble = extract_preamble(text, lang);

  std::vector<Verdict> standalone;
  for (const auto& u : units) standalone.push_back(verdict(u, preamble, {}));

  std::vector<const CheckingUnit*> well_formed;
  for (std::size_t i = 0; i < units.size(); ++i) {
    Verdict v = standalone[i];
    if (lang == Language::kJava && v.kind == Verdict::Kind::kRecoverable) {
      // Retry with the other generated methods in scope.
      std::vector<const CheckingUnit*> pool;
      for (std::size_t j = 0; j < units.size(); ++j) {
        if (standalone[j].kind != Verdict::Kind::kFatalMalformed) pool.push_back(&units[j]);
      }
      const auto ctx = newest_per_name(pool, units[i].name, problem_);
      if (!ctx.empty()) v = verdict(units[i], preamble, ctx);
    }
    if (v.is_well_formed()) well_formed.push_back(&units[i]);
  }

  for (const CheckingUnit* cand : well_formed) {
    if (excluded_main(*cand, problem_)) continue;
    std::vector<CheckingUnit> chosen = newest_per_name(well_formed, cand->name, problem_);
    chosen.push_back(*cand);
    std::sort(chosen.begin(), chosen.end(),
              [](const CheckingUnit& a, const CheckingUnit& b) { return a.span.begin < b.span.begin; });
    Harness h;
    try {
      h = assemble_harness(chosen, preamble, problem_.suite);
    } catch (const HarnessAssemblyError&) {
      continue;
    }
    if (passes(h)) return *cand;
  }
  return std::nullopt;
}

OracleAnswer PrefixOracle::earliest(const std::vector<std::string>& tokens, std::size_t cap) {
  OracleAnswer a;
  std::string text;
  const std::size_t n = std::min(cap, tokens.size());
  for (std::size_t k = 1; k <= n; ++k) {
    text += tokens[k - 1];
    if (auto u = acceptable_unit(text)) {
      a.stop_index = k;
      a.unit_text = u->canonical_text;
      break;
    }
  }
  a.checker_runs = checker_runs_;
  a.harness_runs = harness_runs_;
  return a;
}

}  // namespace stopgen_test
