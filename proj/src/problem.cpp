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

#include "stopgen/problem.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace stopgen {

using json = nlohmann::json;

void ProblemBundle::validate() const {
  if (id.empty()) throw ParseError("problem without id");
  if (suite.cases.empty()) throw ParseError(id + ": test suite is empty");
  if (suite.entry_point.empty()) throw ParseError(id + ": missing entry_point");
  if (prompt.find(suite.entry_point) == std::string::npos) {
    throw ParseError(id + ": entry point '" + suite.entry_point + "' does not occur in the prompt");
  }
}

ProblemBundle parse_problem(const std::string& json_text, const std::string& origin) {
  ProblemBundle p;
  try {
    json j = json::parse(json_text);
    p.id = j.at("id").get<std::string>();
    p.language = parse_language(j.at("language").get<std::string>());
    p.prompt = j.at("prompt").get<std::string>();
    p.suite.language = p.language;
    p.suite.entry_point = j.at("entry_point").get<std::string>();
    p.suite.cases = j.at("tests").get<std::vector<std::string>>();
    if (j.contains("dependencies")) p.suite.dependencies = j["dependencies"].get<std::vector<std::string>>();
    if (j.contains("canonical_solution") && !j["canonical_solution"].is_null()) {
      p.canonical_solution = j["canonical_solution"].get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(origin + ": " + e.what());
  }
  try {
    p.validate();
  } catch (const ParseError& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return p;
}

ProblemBundle load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read problem bundle " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), path.string());
}

std::string serialize_problem(const ProblemBundle& p) {
  json j;
  j["id"] = p.id;
  j["language"] = std::string(to_string(p.language));
  j["prompt"] = p.prompt;
  j["entry_point"] = p.suite.entry_point;
  j["tests"] = p.suite.cases;
  j["dependencies"] = p.suite.dependencies;
  if (p.canonical_solution) j["canonical_solution"] = *p.canonical_solution;
  return j.dump(2) + "\n";
}

std::map<std::string, ProblemBundle> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ParseError("corpus is not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::map<std::string, ProblemBundle> out;
  for (const auto& f : files) {
    ProblemBundle p = load_problem(f);
    std::string id = p.id;
    if (!out.emplace(id, std::move(p)).second) throw ParseError(f.string() + ": duplicate problem id " + id);
  }
  return out;
}

}  // namespace stopgen
