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

// Synthetic babbling traces built from canonical solutions:
//
//   prose  [decoy]  solution  babble...  (padded to the cap)
//
// Decoys are units that can never compile (a bare signature, a typo'd
// body, a type error), so they land in the discard set.

#ifndef STOPGEN_SYNTH_HPP_
#define STOPGEN_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "stopgen/bench.hpp"
#include "stopgen/stream_sources.hpp"

namespace stopgen {

struct SynthOptions {
  std::uint64_t seed = 1;
  std::size_t traces_per_problem = 3;
  std::size_t cap = 1000;
  double decoy_rate = 0.7;  // traces with a decoy before the solution
  double fence_rate = 0.5;  // traces that wrap the solution in ``` fences
  double eos_rate = 0.0;    // traces that end with EOS before the cap
  bool wrong = false;       // emit a solution that fails its tests
  std::string model_id = "synthetic";
  std::int64_t token_period_ns = 25'000'000;  // recorded spacing
};

/// Splits text the way a subword tokenizer roughly would: words with their
/// leading space, indentation runs, single newlines, single punctuation.
/// Concatenating the result gives back `text`.
std::vector<std::string> pseudo_tokenize(std::string_view text);

/// traces_per_problem traces per bundle with a canonical solution, ordered
/// by problem id. Deterministic in `options.seed`. Model ids are
/// `<model_id>-<k>`.
std::vector<TraceRecord> synthesize_traces(const Corpus& corpus, const SynthOptions& options);

/// A well-formed stand-in that fails the tests: same signature, trivial body.
std::string wrong_solution(const ProblemBundle& problem);

}  // namespace stopgen

#endif  // STOPGEN_SYNTH_HPP_
