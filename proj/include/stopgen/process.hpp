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

// Child-process execution with a wall-clock deadline, and per-session
// scratch directories.

#ifndef STOPGEN_PROCESS_HPP_
#define STOPGEN_PROCESS_HPP_

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stopgen/common.hpp"

namespace stopgen {

struct ProcessSpec {
  std::vector<std::string> argv;
  std::filesystem::path cwd;  // empty: inherit
  std::optional<std::string> stdin_data;
  // Extra "NAME=value" entries layered over the filtered parent environment.
  std::vector<std::string> env_overrides;
  Nanos timeout = std::chrono::seconds(10);
  std::size_t output_limit = std::size_t{1} << 20;  // per stream
};

struct ProcessResult {
  int exit_code = -1;  // meaningful when term_signal == 0 and !timed_out
  int term_signal = 0;
  bool timed_out = false;
  std::string out;
  std::string err;
  Nanos duration{};

  bool success() const { return !timed_out && term_signal == 0 && exit_code == 0; }
};

/// Runs argv in its own process group. On deadline the whole group is
/// killed. Throws ConfigurationError when the program cannot be executed.
ProcessResult run_process(const ProcessSpec& spec);

/// Resolves a program name against PATH; nullopt if not found/executable.
std::optional<std::filesystem::path> find_program(const std::string& name);

/// The parent environment minus credential-looking variables
/// (*TOKEN*, *SECRET*, *PASSWORD*, *API_KEY*, ...), plus overrides.
std::vector<std::string> filtered_environment(const std::vector<std::string>& overrides);

/// `<root>/<session-id>/<attempt-n>/` directories for one session.
class ScratchArea {
 public:
  ScratchArea(std::filesystem::path root, std::string session_id);
  // Removes the session directory if nothing was kept in it.
  ~ScratchArea();
  ScratchArea(const ScratchArea&) = delete;
  ScratchArea& operator=(const ScratchArea&) = delete;

  const std::filesystem::path& dir() const { return dir_; }
  const std::string& session_id() const { return session_id_; }

  /// Creates and returns the next `attempt-n` directory.
  std::filesystem::path next_attempt();
  /// Creates a throwaway directory for a toolchain check.
  std::filesystem::path next_check();

 private:
  std::filesystem::path dir_;
  std::string session_id_;
  std::atomic<std::size_t> attempts_{0};
  std::atomic<std::size_t> checks_{0};
};

/// A process-unique, filesystem-safe session id derived from `hint`.
std::string make_session_id(std::string_view hint);

}  // namespace stopgen

#endif  // STOPGEN_PROCESS_HPP_
