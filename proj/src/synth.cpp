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

#include "stopgen/synth.hpp"

#include <algorithm>
#include <cctype>
#include <random>

#include "stopgen/unit_detector.hpp"

namespace stopgen {
namespace {

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string entry_signature(const ProblemBundle& p) {
  const std::string& src = *p.canonical_solution;
  Detection det = detect_complete_units(src + "\n#\n", p.language);
  for (const auto& u : candidate_units(det)) {
    if (u.name != p.suite.entry_point) continue;
    std::string sig = u.signature_text;
    while (!sig.empty() && (std::isspace(static_cast<unsigned char>(sig.back())) || sig.back() == '{')) {
      sig.pop_back();
    }
    return sig;
  }
  throw Error(p.id + ": canonical solution has no unit named " + p.suite.entry_point);
}

const std::vector<std::string>& prose_openers(Language lang) {
  static const std::vector<std::string> py = {
      "Here is a simple Python function that solves the task.\n\n",
      "Sure! Below is an implementation of the requested function.\n\n",
      "To solve this problem, we can iterate over the input and build the answer step by step.\n"
      "The function below does exactly that.\n\n",
  };
  static const std::vector<std::string> java = {
      "Here is a Java method that solves the task.\n\n",
      "Sure! Below is an implementation of the requested method.\n\n",
      "We can solve this with a simple loop. The following method implements the idea.\n\n",
  };
  return lang == Language::kPython ? py : java;
}

std::string decoy(const ProblemBundle& p, const std::string& sig, std::size_t kind) {
  if (p.language == Language::kPython) {
    // The bare signature is the unit that cannot compile without a body.
    if (kind % 2 == 0) return sig + "\n\nActually, let me write the full implementation instead.\n\n";
    return sig + "\n    return return\n\nOops, that has a typo. Here is the corrected version:\n\n";
  }
  if (kind % 2 == 0) {
    return sig + " {\n        int broken = \"decoy\";\n    }\n\nThat does not compile. Here is the corrected version:\n\n";
  }
  return sig + " {\n        return )(;\n    }\n\nOops, a typo. Let me fix that:\n\n";
}

std::string babble(const ProblemBundle& p, std::size_t round) {
  const std::string& f = p.suite.entry_point;
  if (p.language == Language::kPython) {
    switch (round % 4) {
      case 0:
        return "\nThis function works by processing the input step by step and returning the result.\n";
      case 1:
        return "\nExample usage:\n\n```python\nprint(" + f + ".__name__)\n```\n";
      case 2:
        return "\nYou can test it like this:\n\nif __name__ == \"__main__\":\n    print(\"" + f +
               " ready\")\n";
      default:
        return "\nThe time complexity is linear in the size of the input, and the extra space is constant.\n"
               "Let me know if you have any questions!\n";
    }
  }
  switch (round % 4) {
    case 0:
      return "\nThis method works by processing the input step by step and returning the result.\n";
    case 1:
      return "\nExample usage:\n\n```java\npublic static void main(String[] args) {\n    System.out.println(\"" + f +
             "\");\n}\n```\n";
    case 2:
      return "\nNote that the method is static, so it can be called without creating an instance.\n";
    default:
      return "\nThe time complexity is linear in the size of the input, and the extra space is constant.\n"
             "Let me know if you have any questions!\n";
  }
}

}  // namespace

std::vector<std::string> pseudo_tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    std::size_t j = i + 1;
    if (c == '\n') {
      // one token
    } else if (c == ' ' && j < text.size() && word_char(text[j])) {
      while (j < text.size() && word_char(text[j])) ++j;
    } else if (c == ' ') {
      while (j < text.size() && text[j] == ' ' && j - i < 4) ++j;
    } else if (word_char(c)) {
      while (j < text.size() && word_char(text[j])) ++j;
    }
    out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string wrong_solution(const ProblemBundle& p) {
  const std::string sig = entry_signature(p);
  if (p.language == Language::kPython) return sig + "\n    return None\n";
  return sig + " {\n        throw new UnsupportedOperationException();\n    }\n";
}

std::vector<TraceRecord> synthesize_traces(const Corpus& corpus, const SynthOptions& options) {
  if (options.cap < 1) throw Error("synthetic cap must be positive");
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TraceRecord> out;
  for (const auto& [id, p] : corpus) {
    if (!p.canonical_solution) continue;
    const std::string sig = entry_signature(p);
    for (std::size_t k = 0; k < options.traces_per_problem; ++k) {
      const auto& openers = prose_openers(p.language);
      std::string text = openers[(k + rng()) % openers.size()];
      if (unit(rng) < options.decoy_rate) text += decoy(p, sig, rng() % 2);
      const bool fenced = unit(rng) < options.fence_rate;
      const char* fence_lang = p.language == Language::kPython ? "python" : "java";
      if (fenced) text += std::string("```") + fence_lang + "\n";
      text += options.wrong ? wrong_solution(p) : *p.canonical_solution;
      if (fenced) text += "```\n";

      std::vector<std::string> tokens = pseudo_tokenize(text);
      for (std::size_t round = k; tokens.size() < options.cap; ++round) {
        for (auto& t : pseudo_tokenize(babble(p, round))) tokens.push_back(std::move(t));
      }
      TraceRecord r;
      r.terminal = TraceTerminal::kCapHit;
      std::size_t length = options.cap;
      if (unit(rng) < options.eos_rate) {
        const std::size_t body = pseudo_tokenize(text).size();
        if (body + 1 < options.cap) {
          length = body + 1 + static_cast<std::size_t>(rng() % (options.cap - body - 1));
          r.terminal = TraceTerminal::kEos;
        }
      }
      tokens.resize(std::min(length, tokens.size()));
      r.problem_id = p.id;
      r.model_id = options.model_id + "-" + std::to_string(k);
      r.language = p.language;
      r.tokens = std::move(tokens);
      r.timestamps_ns.emplace();
      std::int64_t t = 0;
      for (std::size_t i = 0; i < r.tokens.size(); ++i) {
        r.timestamps_ns->push_back(t);
        t += options.token_period_ns + static_cast<std::int64_t>(rng() % 1000);
      }
      r.temperature = 0.1;
      r.top_p = 0.95;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace stopgen
