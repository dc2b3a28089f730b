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


#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "stopgen/config.hpp"
#include "stopgen/synth.hpp"
#include "test_env.hpp"

namespace {

using namespace stopgen;
using namespace stopgen_test;

// -------------------------------------------------------------- config

TEST(Config, EmptyObjectGivesDefaults) {
  SuppressionConfig c = parse_suppression_config("{}");
  EXPECT_FALSE(c.trigger_policy.has_value());
  EXPECT_EQ(c.max_output_tokens, 1000u);
  EXPECT_EQ(c.test_timeout, std::chrono::seconds(10));
  EXPECT_EQ(c.timeout_scope, TimeoutScope::kHarness);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ParsesEveryKey) {
  SuppressionConfig c = parse_suppression_config(R"({
    "trigger": {"delimiters": [";", "}"]},
    "max_output_tokens": 500,
    "test_timeout_s": 2.5,
    "timeout_scope": "per_case",
    "dependencies": ["/opt/lib.jar"],
    "record_triggers": true,
    "toolchain": {"python_check": ["py", "-I"], "work_dir": "scratch", "check_timeout_s": 3,
                  "keep_attempts": false}
  })",
                                                 "c.json", "/etc/stopgen");
  ASSERT_TRUE(c.trigger_policy.has_value());
  EXPECT_EQ(c.trigger_policy->kind, TriggerPolicy::Kind::kDelimiterSet);
  EXPECT_EQ(c.trigger_policy->delimiters, (std::vector<std::string>{";", "}"}));
  EXPECT_EQ(c.max_output_tokens, 500u);
  EXPECT_EQ(c.test_timeout, std::chrono::milliseconds(2500));
  EXPECT_EQ(c.timeout_scope, TimeoutScope::kPerCase);
  EXPECT_EQ(c.dependencies, std::vector<std::string>{"/opt/lib.jar"});
  EXPECT_TRUE(c.record_triggers);
  EXPECT_EQ(c.toolchain.python_check, (std::vector<std::string>{"py", "-I"}));
  EXPECT_EQ(c.toolchain.work_dir, std::filesystem::path("/etc/stopgen/scratch"));
  EXPECT_EQ(c.toolchain.check_timeout, std::chrono::seconds(3));
  EXPECT_FALSE(c.toolchain.keep_attempts);
}

TEST(Config, NamedTriggers) {
  EXPECT_EQ(parse_suppression_config(R"({"trigger": "token"})").trigger_policy->kind,
            TriggerPolicy::Kind::kEveryToken);
  EXPECT_EQ(parse_suppression_config(R"({"trigger": "line"})").trigger_policy->kind,
            TriggerPolicy::Kind::kEndOfLine);
  auto d = parse_suppression_config(R"({"trigger": "delims"})").trigger_policy;
  EXPECT_EQ(d->delimiters, (std::vector<std::string>{"}", "\n"}));
}

TEST(Config, RejectsBadInput) {
  for (const char* bad : {
           R"([])",
           R"({"trigger": "sometimes"})",
           R"({"trigger": {"delimiters": ["x"], "extra": 1}})",
           R"({"max_output_tokens": 0})",
           R"({"test_timeout_s": 0})",
           R"({"test_timeout_s": -1})",
           R"({"timeout_scope": "forever"})",
           R"({"toolchain": {"javac": []}})",
           R"({"toolchain": {"shell": ["sh"]}})",
           R"({"unknown": 1})",
           R"({"max_output_tokens": "many"})",
           R"(not json)",
       }) {
    try {
      parse_suppression_config(bad, "c.json");
      ADD_FAILURE() << bad;
    } catch (const ConfigurationError& e) {
      EXPECT_EQ(std::string(e.what()).rfind("c.json", 0), 0u) << e.what();
    }
  }
}

TEST(Config, SerializeRoundTrip) {
  SuppressionConfig c;
  c.trigger_policy = TriggerPolicy::delimiter_set({"}", ";"});
  c.max_output_tokens = 321;
  c.test_timeout = std::chrono::milliseconds(1500);
  c.timeout_scope = TimeoutScope::kPerCase;
  c.dependencies = {"a.jar"};
  c.toolchain.work_dir = "/tmp/x";
  c.toolchain.keep_attempts = false;
  const std::string text = serialize_suppression_config(c);
  SuppressionConfig back = parse_suppression_config(text);
  EXPECT_EQ(serialize_suppression_config(back), text);
  EXPECT_EQ(back.trigger_policy->delimiters, c.trigger_policy->delimiters);

  c.trigger_policy = TriggerPolicy::every_token();
  EXPECT_EQ(parse_suppression_config(serialize_suppression_config(c)).trigger_policy->kind,
            TriggerPolicy::Kind::kEveryToken);
}

TEST(Config, LoadsFromFileRelativeToIt) {
  const auto dir = temp_dir("config");
  {
    std::ofstream(dir / "rules.txt") << "python invalid syntax SyntaxError\n";
    std::ofstream(dir / "c.json") << R"({"toolchain": {"work_dir": "w", "diagnostic_rules": "rules.txt"}})";
  }
  SuppressionConfig c = load_suppression_config(dir / "c.json");
  EXPECT_EQ(c.toolchain.work_dir, dir / "w");
  EXPECT_THROW(load_suppression_config(dir / "missing.json"), ConfigurationError);
}

// --------------------------------------------------------------- synth

TEST(PseudoTokenize, RoundTripsArbitraryText) {
  std::mt19937_64 rng(13);
  const std::string alphabet = "ab_Z09 \n\t(){}:;.,'\"#=+-*";
  for (int round = 0; round < 500; ++round) {
    std::string s;
    const std::size_t n = rng() % 200;
    for (std::size_t i = 0; i < n; ++i) s += alphabet[rng() % alphabet.size()];
    std::string joined;
    for (const auto& t : pseudo_tokenize(s)) {
      EXPECT_FALSE(t.empty());
      joined += t;
    }
    EXPECT_EQ(joined, s);
  }
}

TEST(PseudoTokenize, Shapes) {
  EXPECT_EQ(pseudo_tokenize("def square(x):\n        return x"),
            (std::vector<std::string>{"def", " square", "(", "x", ")", ":", "\n", "    ", "    ", "return", " x"}));
}

class Synth : public ::testing::Test {
 protected:
  static Corpus corpus() { return all_bundles(); }
};

TEST_F(Synth, ShapeAndDeterminism) {
  Corpus c = corpus();
  SynthOptions o;
  o.seed = 9;
  auto a = synthesize_traces(c, o);
  auto b = synthesize_traces(c, o);
  ASSERT_EQ(a.size(), c.size() * 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(serialize_trace(a[i]), serialize_trace(b[i]));
    EXPECT_EQ(a[i].tokens.size(), 1000u);
    EXPECT_EQ(a[i].terminal, TraceTerminal::kCapHit);
    EXPECT_NO_THROW(a[i].validate());
    std::string text;
    for (const auto& t : a[i].tokens) text += t;
    const ProblemBundle& p = c.at(a[i].problem_id);
    EXPECT_EQ(a[i].language, p.language);
    EXPECT_NE(text.find(*p.canonical_solution), std::string::npos) << a[i].problem_id;
  }
  o.seed = 10;
  auto d = synthesize_traces(c, o);
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += serialize_trace(a[i]) == serialize_trace(d[i]);
  EXPECT_LT(same, a.size());
}

TEST_F(Synth, RatesAreHonoured) {
  Corpus c = corpus();
  SynthOptions o;
  o.decoy_rate = 1.0;
  o.fence_rate = 0.0;
  o.eos_rate = 1.0;
  o.cap = 600;
  for (const auto& t : synthesize_traces(c, o)) {
    std::string text;
    for (const auto& tok : t.tokens) text += tok;
    const ProblemBundle& p = c.at(t.problem_id);
    EXPECT_EQ(t.terminal, TraceTerminal::kEos);
    EXPECT_LT(t.tokens.size(), 600u);
    // The decoy repeats the entry signature before the solution.
    const std::size_t sol = text.find(*p.canonical_solution);
    ASSERT_NE(sol, std::string::npos);
    EXPECT_NE(text.substr(0, sol).find(p.suite.entry_point), std::string::npos) << text;
    EXPECT_EQ(text.substr(0, sol).find("```"), std::string::npos);
  }
}

TEST_F(Synth, WrongSolutionIsWellFormedButFails) {
  for (Language lang : {Language::kPython, Language::kJava}) {
    if (lang == Language::kPython && !have_python()) continue;
    if (lang == Language::kJava && !have_java()) continue;
    Corpus c = bundles(lang);
    const ProblemBundle& p = c.begin()->second;
    SCOPED_TRACE(p.id);
    ToolchainEvaluator good(test_toolchain(), lang, {std::chrono::seconds(5)}, "synth-good");
    PostProcessResult ok = post_process(pseudo_tokenize(*p.canonical_solution + "\n"), p.suite, good);
    EXPECT_TRUE(ok.passed);
    ToolchainEvaluator bad(test_toolchain(), lang, {std::chrono::seconds(5)}, "synth-bad");
    PostProcessResult wrong = post_process(pseudo_tokenize(wrong_solution(p)), p.suite, bad);
    EXPECT_EQ(wrong.test_executions, 1u);
    EXPECT_FALSE(wrong.passed);
  }
}

}  // namespace
