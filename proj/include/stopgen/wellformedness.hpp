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

// Feasibility checks through the real toolchain, and the discard set.

#ifndef STOPGEN_WELLFORMEDNESS_HPP_
#define STOPGEN_WELLFORMEDNESS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "stopgen/diagnostics.hpp"
#include "stopgen/process.hpp"
#include "stopgen/toolchain.hpp"
#include "stopgen/unit_detector.hpp"

namespace stopgen {

struct Verdict {
  enum class Kind { kWellFormed, kFatalMalformed, kRecoverable };

  Kind kind = Kind::kWellFormed;
  std::optional<Diagnostic> diagnostic;  // absent only for kWellFormed

  static Verdict well_formed() { return {}; }
  static Verdict fatal(Diagnostic d) { return {Kind::kFatalMalformed, std::move(d)}; }
  static Verdict recoverable(Diagnostic d) { return {Kind::kRecoverable, std::move(d)}; }

  bool is_well_formed() const { return kind == Kind::kWellFormed; }
};

std::string_view to_string(Verdict::Kind kind);

/// True only for kFatalMalformed: nothing generated later can repair it.
bool should_discard(const Verdict& verdict);

/// Canonical texts rejected for the rest of a session. Membership is exact
/// byte equality, so a longer unit that merely starts with a discarded one
/// is a different unit.
class DiscardSet {
 public:
  bool contains(std::string_view canonical) const;
  void insert(std::string_view canonical);
  void record_hit() { ++hits_; }

  std::size_t hits() const { return hits_; }
  std::size_t size() const { return set_.size(); }

 private:
  std::unordered_set<std::string> set_;
  std::size_t hits_ = 0;
};

/// Compiles preamble + unit (plus `siblings` for Java, so calls into other
/// generated methods resolve). Diagnostics located in siblings are ignored;
/// ones on import lines make the unit Recoverable. A checker timeout is
/// Recoverable(Other). Throws ConfigurationError if the checker cannot run.
Verdict check_wellformedness(const CheckingUnit& unit, std::string_view preamble,
                             const Toolchain& tc, ScratchArea& scratch,
                             std::span<const CheckingUnit> siblings = {});

/// Per-session memo of verdicts keyed by (unit, preamble, siblings).
class CheckCache {
 public:
  static std::string key(const CheckingUnit& unit, std::string_view preamble,
                         std::span<const CheckingUnit> siblings = {});

  const Verdict* find(const std::string& key) const;
  void put(std::string key, Verdict v) { map_.insert_or_assign(std::move(key), std::move(v)); }
  std::size_t size() const { return map_.size(); }

 private:
  std::unordered_map<std::string, Verdict> map_;
};

}  // namespace stopgen

#endif  // STOPGEN_WELLFORMEDNESS_HPP_
