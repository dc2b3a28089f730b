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

// Incremental function-boundary detection over partially generated text.
//
// Detection is a plausibility filter, not a parser: it finds spans that are
// delimited like a top-level function (indentation for Python, balanced
// braces for Java) and leaves real validation to the toolchain. Everything
// here is pure and thread-safe.

#ifndef STOPGEN_UNIT_DETECTOR_HPP_
#define STOPGEN_UNIT_DETECTOR_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stopgen/common.hpp"

namespace stopgen {

/// Half-open character range [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const Span&, const Span&) = default;
};

/// Generated text with markdown fence lines removed, plus the offset map
/// back to the raw text. Lines whose first non-blank characters are ``` are
/// dropped, as is an unterminated last line that could still become one.
class FencelessText {
 public:
  FencelessText() = default;
  explicit FencelessText(std::string_view raw);

  const std::string& text() const { return text_; }

  /// Maps an offset in text() to the corresponding raw offset. An offset
  /// equal to text().size() maps to the end of the last kept segment.
  std::size_t to_raw(std::size_t offset) const;

 private:
  struct Segment {
    std::size_t stripped_begin;
    std::size_t raw_begin;
    std::size_t length;
  };
  std::string text_;
  std::vector<Segment> segments_;
};

/// A candidate function span. Identity is the exact source slice.
struct CheckingUnit {
  Language language = Language::kPython;
  Span span;  // offsets into the fence-stripped text
  std::string name;
  std::string signature_text;
  std::string body_text;
  std::string canonical_text;
  std::vector<std::size_t> preamble_refs;
  // Python only: the unit runs to the end of the text and has not been
  // closed by a dedented line yet.
  bool open = false;

  friend bool operator==(const CheckingUnit& a, const CheckingUnit& b) {
    return a.canonical_text == b.canonical_text;
  }
};

/// Start of a unit whose end has not been generated yet.
struct OpenUnitMarker {
  std::size_t begin = 0;
  // Python: the signature through the colon is complete, so the unit can be
  // materialized as a trailing candidate.
  bool signature_complete = false;
};

struct Detection {
  FencelessText source;
  std::vector<CheckingUnit> complete;
  std::optional<OpenUnitMarker> in_progress;
  // Python only: the in-progress unit cut at the last significant line.
  std::optional<CheckingUnit> trailing;
};

/// Finds complete units in textual order. Units reported complete for text
/// T are reported again, with identical spans, for every extension of T.
Detection detect_complete_units(std::string_view text, Language lang);

/// Units evaluated at a trigger point: the complete ones followed by the
/// trailing open Python unit, if any. Java in-progress units never qualify
/// since their braces do not balance yet.
std::vector<CheckingUnit> candidate_units(const Detection& detection);

/// One top-level import (or package, for Java) statement.
struct PreambleStatement {
  std::size_t offset = 0;  // into the fence-stripped text
  std::string text;
};

/// All import/package statements in the fence-stripped text, in order,
/// duplicates included.
std::vector<PreambleStatement> find_preamble_statements(std::string_view stripped,
                                                        Language lang);

/// Deduplicated import statements joined by newlines, in first-seen order.
/// Takes raw generated text; fences are stripped first.
std::string extract_preamble(std::string_view text, Language lang);

/// Parsed pieces of a Java method header, used for entry-point aliasing.
struct JavaSignature {
  std::string type_parameters;  // "<T>" or empty
  std::string return_type;
  std::string name;
  std::string parameters;  // text between the parentheses
  std::vector<std::string> parameter_names;
};

std::optional<JavaSignature> parse_java_signature(std::string_view signature_text);

}  // namespace stopgen

#endif  // STOPGEN_UNIT_DETECTOR_HPP_
