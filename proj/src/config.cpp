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


#include "stopgen/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace stopgen {
namespace {

using json = nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw ConfigurationError(where + ": unknown key '" + k + "'");
  }
}

Nanos seconds(const json& v, const std::string& what) {
  const double s = v.get<double>();
  if (!(s > 0)) throw ConfigurationError(what + " must be positive");
  return std::chrono::duration_cast<Nanos>(std::chrono::duration<double>(s));
}

std::vector<std::string> argv_prefix(const json& v, const std::string& what) {
  auto out = v.get<std::vector<std::string>>();
  if (out.empty()) throw ConfigurationError(what + " must name a program");
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

double to_seconds(Nanos n) { return std::chrono::duration<double>(n).count(); }

}  // namespace

SuppressionConfig parse_suppression_config(const std::string& json_text, const std::string& origin,
                                           const std::filesystem::path& base_dir) {
  SuppressionConfig c;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw ConfigurationError("top level must be an object");
    reject_unknown(j,
                   {"trigger", "max_output_tokens", "test_timeout_s", "timeout_scope", "dependencies",
                    "record_triggers", "toolchain"},
                   "config");
    if (j.contains("trigger")) {
      const json& t = j["trigger"];
      if (t.is_string()) {
        c.trigger_policy = parse_trigger(t.get<std::string>());
      } else {
        reject_unknown(t, {"delimiters"}, "trigger");
        c.trigger_policy = TriggerPolicy::delimiter_set(t.at("delimiters").get<std::vector<std::string>>());
      }
    }
    if (j.contains("max_output_tokens")) {
      const auto n = j["max_output_tokens"].get<long long>();
      if (n < 1) throw ConfigurationError("max_output_tokens must be positive");
      c.max_output_tokens = static_cast<std::size_t>(n);
    }
    if (j.contains("test_timeout_s")) c.test_timeout = seconds(j["test_timeout_s"], "test_timeout_s");
    if (j.contains("timeout_scope")) {
      const auto s = j["timeout_scope"].get<std::string>();
      if (s == "harness") {
        c.timeout_scope = TimeoutScope::kHarness;
      } else if (s == "per_case") {
        c.timeout_scope = TimeoutScope::kPerCase;
      } else {
        throw ConfigurationError("timeout_scope must be harness or per_case, got '" + s + "'");
      }
    }
    if (j.contains("dependencies")) c.dependencies = j["dependencies"].get<std::vector<std::string>>();
    c.record_triggers = j.value("record_triggers", false);
    if (j.contains("toolchain")) {
      const json& t = j["toolchain"];
      reject_unknown(t,
                     {"python_check", "python_run", "javac", "java", "work_dir", "check_timeout_s", "keep_attempts",
                      "diagnostic_rules"},
                     "toolchain");
      Toolchain& tc = c.toolchain;
      if (t.contains("python_check")) tc.python_check = argv_prefix(t["python_check"], "python_check");
      if (t.contains("python_run")) tc.python_run = argv_prefix(t["python_run"], "python_run");
      if (t.contains("javac")) tc.javac = argv_prefix(t["javac"], "javac");
      if (t.contains("java")) tc.java = argv_prefix(t["java"], "java");
      if (t.contains("work_dir")) tc.work_dir = resolve(base_dir, t["work_dir"].get<std::string>());
      if (t.contains("check_timeout_s")) tc.check_timeout = seconds(t["check_timeout_s"], "check_timeout_s");
      tc.keep_attempts = t.value("keep_attempts", tc.keep_attempts);
      if (t.contains("diagnostic_rules")) {
        tc.rules = std::make_shared<const DiagnosticRules>(
            DiagnosticRules::load(resolve(base_dir, t["diagnostic_rules"].get<std::string>())));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigurationError(origin + ": " + e.what());
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(origin + ": " + e.what());
  } catch (const ParseError& e) {
    throw ConfigurationError(origin + ": " + e.what());
  }
  return c;
}

SuppressionConfig load_suppression_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_suppression_config(buf.str(), path.string(), path.parent_path());
}

std::string serialize_suppression_config(const SuppressionConfig& c) {
  json j;
  if (c.trigger_policy) {
    if (c.trigger_policy->kind == TriggerPolicy::Kind::kDelimiterSet) {
      j["trigger"] = {{"delimiters", c.trigger_policy->delimiters}};
    } else {
      j["trigger"] = std::string(to_string(c.trigger_policy->kind));
    }
  }
  j["max_output_tokens"] = c.max_output_tokens;
  j["test_timeout_s"] = to_seconds(c.test_timeout);
  j["timeout_scope"] = c.timeout_scope == TimeoutScope::kHarness ? "harness" : "per_case";
  j["dependencies"] = c.dependencies;
  j["record_triggers"] = c.record_triggers;
  const Toolchain& tc = c.toolchain;
  j["toolchain"] = {{"python_check", tc.python_check},
                    {"python_run", tc.python_run},
                    {"javac", tc.javac},
                    {"java", tc.java},
                    {"work_dir", tc.work_dir.string()},
                    {"check_timeout_s", to_seconds(tc.check_timeout)},
                    {"keep_attempts", tc.keep_attempts}};
  return j.dump(2) + "\n";
}

}  // namespace stopgen
