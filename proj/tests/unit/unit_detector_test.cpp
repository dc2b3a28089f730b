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

#include <random>
#include <string>
#include <vector>

#include "stopgen/unit_detector.hpp"
#include "test_env.hpp"

namespace {

using namespace stopgen;

std::vector<std::string> names(const std::vector<CheckingUnit>& units) {
  std::vector<std::string> out;
  for (const auto& u : units) out.push_back(u.name);
  return out;
}

// ---------------------------------------------------------------- python

TEST(PythonDetector, UnitEndsAtDedentedLine) {
  const std::string text = "def square(x):\n    return x * x\nprint(\"done\")\n";
  Detection d = detect_complete_units(text, Language::kPython);
  ASSERT_EQ(d.complete.size(), 1u);
  EXPECT_EQ(d.complete[0].name, "square");
  // Canonical text stops at the last significant line.
  EXPECT_EQ(d.complete[0].canonical_text, "def square(x):\n    return x * x");
  EXPECT_EQ(d.complete[0].signature_text, "def square(x):");
  EXPECT_FALSE(d.in_progress.has_value());
}

TEST(PythonDetector, BareSignatureIsInProgress) {
  Detection d = detect_complete_units("def square(x):\n", Language::kPython);
  EXPECT_TRUE(d.complete.empty());
  ASSERT_TRUE(d.in_progress.has_value());
  EXPECT_EQ(d.in_progress->begin, 0u);
  EXPECT_TRUE(d.in_progress->signature_complete);
}

TEST(PythonDetector, ProseOnlyYieldsNothing) {
  Detection d = detect_complete_units("Here is a function that squares a number.\n", Language::kPython);
  EXPECT_TRUE(d.complete.empty());
  EXPECT_FALSE(d.in_progress.has_value());
  EXPECT_TRUE(candidate_units(d).empty());
}

TEST(PythonDetector, TrailingUnitIsACandidate) {
  Detection d = detect_complete_units("Sure.\n\ndef square(x):\n    return x * x\n", Language::kPython);
  EXPECT_TRUE(d.complete.empty());
  auto c = candidate_units(d);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_TRUE(c[0].open);
  EXPECT_EQ(c[0].canonical_text, "def square(x):\n    return x * x");
}

// Closing the unit later must not change its identity.
TEST(PythonDetector, ClosedUnitEqualsItsTrailingForm) {
  auto open = candidate_units(detect_complete_units("def f():\n    return 1\n", Language::kPython));
  auto closed = detect_complete_units("def f():\n    return 1\n\nx = 2\n", Language::kPython).complete;
  ASSERT_EQ(open.size(), 1u);
  ASSERT_EQ(closed.size(), 1u);
  EXPECT_EQ(open[0].canonical_text, closed[0].canonical_text);
  EXPECT_EQ(open[0].span, closed[0].span);
}

TEST(PythonDetector, TrailingUnitDropsTrailingBlankLines) {
  Detection d = detect_complete_units("def f():\n    return 1\n\n\n", Language::kPython);
  auto c = candidate_units(d);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].canonical_text, "def f():\n    return 1");
}

TEST(PythonDetector, BlankAndIndentedLinesStayInside) {
  const std::string text = "def f(a):\n    x = a\n\n    return x\n\nend\n";
  Detection d = detect_complete_units(text, Language::kPython);
  ASSERT_EQ(d.complete.size(), 1u);
  EXPECT_EQ(d.complete[0].canonical_text, "def f(a):\n    x = a\n\n    return x");
}

TEST(PythonDetector, NestedDefsBelongToTheOuterUnit) {
  const std::string text = "def outer(a):\n    def inner(b):\n        return b\n    return inner(a)\nx\n";
  Detection d = detect_complete_units(text, Language::kPython);
  EXPECT_EQ(names(d.complete), std::vector<std::string>{"outer"});
}

TEST(PythonDetector, AnnotationsAndMultilineSignature) {
  const std::string text = "def add(a: int,\n        b: int = 2) -> int:\n    return a + b\nok\n";
  Detection d = detect_complete_units(text, Language::kPython);
  ASSERT_EQ(d.complete.size(), 1u);
  EXPECT_EQ(d.complete[0].name, "add");
  EXPECT_EQ(d.complete[0].signature_text, "def add(a: int,\n        b: int = 2) -> int:");
}

TEST(PythonDetector, MultilineStringDoesNotEndTheUnit) {
  const std::string text = "def f():\n    s = \"\"\"\nnot a dedent\n\"\"\"\n    return s\nx\n";
  Detection d = detect_complete_units(text, Language::kPython);
  ASSERT_EQ(d.complete.size(), 1u);
  EXPECT_NE(d.complete[0].canonical_text.find("return s"), std::string::npos);
}

TEST(PythonDetector, FencesAreStripped) {
  const std::string text = "Here:\n```python\ndef f():\n    return 1\n```\nDone.\n";
  Detection d = detect_complete_units(text, Language::kPython);
  ASSERT_EQ(d.complete.size(), 1u);
  EXPECT_EQ(d.complete[0].canonical_text, "def f():\n    return 1");
  const auto& u = d.complete[0];
  EXPECT_EQ(d.source.text().substr(u.span.begin, u.span.size()), u.canonical_text);
  // Raw offsets land on the same text.
  const std::size_t rb = d.source.to_raw(u.span.begin);
  EXPECT_EQ(text.substr(rb, u.canonical_text.size()), u.canonical_text);
}

TEST(PythonDetector, MethodsInsideClassesAreNotTopLevel) {
  const std::string text = "class A:\n    def m(self):\n        return 1\nx\n";
  Detection d = detect_complete_units(text, Language::kPython);
  EXPECT_TRUE(d.complete.empty());
}

TEST(PythonDetector, DecoratedAndAsyncFunctions) {
  const std::string text = "async def g():\n    return 2\nx\n";
  Detection d = detect_complete_units(text, Language::kPython);
  ASSERT_EQ(d.complete.size(), 1u);
  EXPECT_EQ(d.complete[0].name, "g");
}

TEST(PythonPreamble, ImportsInOrderDeduplicated) {
  const std::string text = "import math\nfrom typing import List\n\ndef f():\n    return 1\nimport math\nimport os\n";
  EXPECT_EQ(extract_preamble(text, Language::kPython), "import math\nfrom typing import List\nimport os");
}

TEST(PythonPreamble, IndentedImportsAreNotTopLevel) {
  const std::string text = "def f():\n    import os\n    return 1\n";
  EXPECT_EQ(extract_preamble(text, Language::kPython), "");
}

// ------------------------------------------------------------------ java

TEST(JavaDetector, NestedBracesBalance) {
  const std::string text = "public static int f(int x) { if (x > 0) { return x; } return -x; }";
  Detection d = detect_complete_units(text, Language::kJava);
  ASSERT_EQ(d.complete.size(), 1u);
  EXPECT_EQ(d.complete[0].name, "f");
  EXPECT_EQ(d.complete[0].canonical_text, text);
}

TEST(JavaDetector, OpenMethodIsInProgressOnly) {
  Detection d = detect_complete_units("public static int f(int x) {\n    return x;\n", Language::kJava);
  EXPECT_TRUE(d.complete.empty());
  EXPECT_TRUE(d.in_progress.has_value());
  EXPECT_TRUE(candidate_units(d).empty());
}

TEST(JavaDetector, BracesInStringsCharsAndComments) {
  const std::string text =
      "static String f() {\n"
      "    // } not a close\n"
      "    /* { nor an open */\n"
      "    char c = '}';\n"
      "    return \"{\" + c;\n"
      "}\n";
  Detection d = detect_complete_units(text, Language::kJava);
  ASSERT_EQ(d.complete.size(), 1u);
  EXPECT_EQ(d.complete[0].canonical_text, text.substr(0, text.size() - 1));
}

TEST(JavaDetector, GenericsThrowsAndArrays) {
  const std::string text =
      "public static <T extends Comparable<T>> List<T> sorted(List<T> xs) throws Exception {\n"
      "    return xs;\n}\n"
      "static int[] twice(int[] a) { return a; }\n";
  Detection d = detect_complete_units(text, Language::kJava);
  EXPECT_EQ(names(d.complete), (std::vector<std::string>{"sorted", "twice"}));
}

TEST(JavaDetector, ControlFlowIsNotASignature) {
  Detection d = detect_complete_units("if (x) { y(); }\nwhile (z) { }\n", Language::kJava);
  EXPECT_TRUE(d.complete.empty());
}

TEST(JavaDetector, MethodsInsideAClassWrapper) {
  const std::string text =
      "public class Solution {\n"
      "    public static int a(int x) { return x; }\n"
      "    static int b(int x) { return a(x); }\n"
      "}\n";
  Detection d = detect_complete_units(text, Language::kJava);
  EXPECT_EQ(names(d.complete), (std::vector<std::string>{"a", "b"}));
}

TEST(JavaDetector, MainIsDetectedLikeAnyMethod) {
  const std::string text = "public static void main(String[] args) {\n    System.out.println(1);\n}\n";
  Detection d = detect_complete_units(text, Language::kJava);
  EXPECT_EQ(names(d.complete), std::vector<std::string>{"main"});
}

TEST(JavaSignature, Parse) {
  auto s = parse_java_signature("public static <T> int count(List<T> xs, int k)");
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->type_parameters, "<T>");
  EXPECT_EQ(s->return_type, "int");
  EXPECT_EQ(s->name, "count");
  EXPECT_EQ(s->parameter_names, (std::vector<std::string>{"xs", "k"}));
}

TEST(JavaPreamble, ImportsAndPackages) {
  const std::string text = "package a.b;\nimport java.util.*;\nstatic int f() { return 1; }\nimport java.util.*;\n";
  const std::string pre = extract_preamble(text, Language::kJava);
  EXPECT_NE(pre.find("import java.util.*;"), std::string::npos);
  EXPECT_EQ(pre.find("import java.util.*;"), pre.rfind("import java.util.*;"));
}

// ----------------------------------------------------------- properties

struct Generated {
  std::string text;
  std::vector<std::string> functions;  // names, in order
};

class DocGen {
 public:
  explicit DocGen(std::uint64_t seed) : rng_(seed) {}

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::string ident() {
    static const char* parts[] = {"f", "g", "calc", "helper", "run", "total", "x2", "do_it", "val"};
    return std::string(parts[pick(9)]) + std::to_string(pick(100));
  }

  Generated python() {
    Generated g;
    const std::size_t pieces = 1 + pick(6);
    bool fenced = false;
    for (std::size_t i = 0; i < pieces; ++i) {
      switch (pick(6)) {
        case 0:
          g.text += "Here is some prose about " + ident() + ".\n";
          break;
        case 1:
          g.text += fenced ? "```\n" : "```python\n";
          fenced = !fenced;
          break;
        case 2:
          g.text += "import math\n";
          break;
        default: {
          const std::string name = ident();
          g.functions.push_back(name);
          g.text += "def " + name + "(a, b=1):\n";
          const std::size_t lines = 1 + pick(4);
          for (std::size_t l = 0; l < lines; ++l) {
            switch (pick(5)) {
              case 0:
                g.text += "\n";
                break;
              case 1:
                g.text += "    if a:\n        a = (a +\n  b)\n";
                break;
              case 2:
                g.text += "    # comment\n";
                break;
              case 3:
                g.text += "    s = '''\ntext\n'''\n";
                break;
              default:
                g.text += "    a = a * b\n";
            }
          }
          g.text += "    return a\n";
        }
      }
    }
    g.text += "The end.\n";
    return g;
  }

  Generated java() {
    Generated g;
    const std::size_t pieces = 1 + pick(6);
    for (std::size_t i = 0; i < pieces; ++i) {
      switch (pick(5)) {
        case 0:
          g.text += "Some prose (with parens) about it.\n";
          break;
        case 1:
          g.text += "import java.util.*;\n";
          break;
        default: {
          const std::string name = ident();
          g.functions.push_back(name);
          g.text += "public static int " + name + "(int a, int b) {\n";
          const std::size_t lines = 1 + pick(4);
          for (std::size_t l = 0; l < lines; ++l) {
            switch (pick(5)) {
              case 0:
                g.text += "    if (a > b) { a = b; }\n";
                break;
              case 1:
                g.text += "    String s = \"}{\";\n";
                break;
              case 2:
                g.text += "    // }\n";
                break;
              case 3:
                g.text += "    char c = '{';\n";
                break;
              default:
                g.text += "    for (int i = 0; i < b; i++) { a += i; }\n";
            }
          }
          g.text += "    return a;\n}\n";
        }
      }
    }
    return g;
  }

 private:
  std::mt19937_64 rng_;
};

void check_span_fidelity(const Detection& d) {
  for (const auto& u : candidate_units(d)) {
    ASSERT_LE(u.span.end, d.source.text().size());
    EXPECT_EQ(d.source.text().substr(u.span.begin, u.span.size()), u.canonical_text);
    EXPECT_EQ(u.canonical_text.rfind(u.signature_text, 0), 0u) << u.canonical_text;
  }
}

TEST(DetectorProperties, GeneratedPythonFunctionsAreFound) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    DocGen gen(seed);
    const Generated g = gen.python();
    Detection d = detect_complete_units(g.text, Language::kPython);
    EXPECT_EQ(names(d.complete), g.functions) << "seed " << seed << "\n" << g.text;
    check_span_fidelity(d);
  }
}

TEST(DetectorProperties, GeneratedJavaMethodsAreFound) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    DocGen gen(seed);
    const Generated g = gen.java();
    Detection d = detect_complete_units(g.text, Language::kJava);
    EXPECT_EQ(names(d.complete), g.functions) << "seed " << seed << "\n" << g.text;
    check_span_fidelity(d);
  }
}

TEST(DetectorProperties, Deterministic) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    DocGen gen(seed);
    for (Language lang : {Language::kPython, Language::kJava}) {
      const Generated g = lang == Language::kPython ? gen.python() : gen.java();
      Detection a = detect_complete_units(g.text, lang);
      Detection b = detect_complete_units(g.text, lang);
      ASSERT_EQ(a.complete.size(), b.complete.size());
      for (std::size_t i = 0; i < a.complete.size(); ++i) {
        EXPECT_EQ(a.complete[i].span, b.complete[i].span);
        EXPECT_EQ(a.complete[i].canonical_text, b.complete[i].canonical_text);
      }
    }
  }
}

// A unit complete in a prefix stays complete, with the same span, in
// every extension.
TEST(DetectorProperties, CompletenessIsMonotone) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    DocGen gen(seed);
    for (Language lang : {Language::kPython, Language::kJava}) {
      const Generated g = lang == Language::kPython ? gen.python() : gen.java();
      std::vector<CheckingUnit> before;
      for (std::size_t cut = 0; cut <= g.text.size(); cut += 1 + gen.pick(7)) {
        Detection d = detect_complete_units(std::string_view(g.text).substr(0, cut), lang);
        check_span_fidelity(d);
        ASSERT_GE(d.complete.size(), before.size()) << "seed " << seed << " cut " << cut;
        for (std::size_t i = 0; i < before.size(); ++i) {
          EXPECT_EQ(d.complete[i].span, before[i].span) << "seed " << seed << " cut " << cut;
          EXPECT_EQ(d.complete[i].canonical_text, before[i].canonical_text);
        }
        before = d.complete;
      }
    }
  }
}

TEST(DetectorProperties, UnitEqualityIsByteEquality) {
  Detection a = detect_complete_units("def f():\n    return 1\nx\n", Language::kPython);
  Detection b = detect_complete_units("def f():\n    return 1\n    return 2\nx\n", Language::kPython);
  ASSERT_EQ(a.complete.size(), 1u);
  ASSERT_EQ(b.complete.size(), 1u);
  EXPECT_FALSE(a.complete[0] == b.complete[0]);
  EXPECT_EQ(b.complete[0].canonical_text.rfind(a.complete[0].canonical_text, 0), 0u);
}

}  // namespace
