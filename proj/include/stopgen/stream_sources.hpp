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

// Token sources: recorded traces (replay) and a live chat-completions
// stream.
//
// Trace files hold one JSON record per line:
//   {"problem_id": "...", "model_id": "...", "language": "python",
//    "tokens": ["def", " f", ...], "timestamps_ns": [...],
//    "terminal": "eos", "temperature": 0.1, "top_p": 0.95}
// timestamps_ns is optional. "cap" traces carry no EOS event.

#ifndef STOPGEN_STREAM_SOURCES_HPP_
#define STOPGEN_STREAM_SOURCES_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stopgen/common.hpp"
#include "stopgen/session.hpp"

namespace stopgen {

enum class TraceTerminal { kEos, kCapHit };

struct TraceRecord {
  std::string problem_id;
  std::string model_id;
  Language language = Language::kPython;
  std::vector<std::string> tokens;
  std::optional<std::vector<std::int64_t>> timestamps_ns;
  TraceTerminal terminal = TraceTerminal::kEos;
  double temperature = 0.0;
  double top_p = 1.0;

  /// Throws ParseError: timestamps must match tokens and never decrease;
  /// only an EOS trace may be empty.
  void validate() const;
};

/// Parses one record. `origin` is put in front of error messages.
TraceRecord parse_trace(const std::string& line, const std::string& origin = "<trace>");
/// One line, no trailing newline. Keys in a fixed order.
std::string serialize_trace(const TraceRecord& record);

/// Every record of a trace file; errors name the file and 1-based line.
std::vector<TraceRecord> read_traces(const std::filesystem::path& path);
void write_traces(const std::filesystem::path& path, const std::vector<TraceRecord>& records);
void append_trace(std::ostream& out, const TraceRecord& record);

struct ReplayOptions {
  // Sleep so events arrive with the recorded spacing. Needs timestamps.
  bool pacing = false;
};

class ReplaySource : public TokenSource {
 public:
  explicit ReplaySource(TraceRecord record, ReplayOptions options = {});

  std::optional<TokenEvent> next() override;
  void cancel() override { cancelled_ = true; }

  const TraceRecord& record() const { return record_; }
  bool cancelled() const { return cancelled_; }

 private:
  TraceRecord record_;
  ReplayOptions options_;
  std::size_t pos_ = 0;
  bool eos_sent_ = false;
  bool cancelled_ = false;
  Clock::time_point start_{};
};

/// Opens a trace file. With several records, `problem_id` picks one;
/// without it the file must hold exactly one record.
std::unique_ptr<ReplaySource> open_replay(const std::filesystem::path& path,
                                          const std::optional<std::string>& problem_id = std::nullopt,
                                          ReplayOptions options = {});

struct EndpointConfig {
  std::string base_url;  // e.g. http://127.0.0.1:8000/v1
  std::string model;
  std::size_t max_tokens = 1000;
  double temperature = 0.1;
  double top_p = 0.95;
  std::string auth_env = "OPENAI_API_KEY";  // empty: no Authorization header
  Nanos request_timeout = std::chrono::seconds(120);
  std::size_t buffer = 1;  // events read ahead of the consumer
  std::optional<std::string> system_prompt;

  /// Throws ConfigurationError.
  void validate(std::size_t max_output_tokens) const;
};

EndpointConfig parse_endpoint_config(const std::string& json_text, const std::string& origin = "<endpoint>");
EndpointConfig load_endpoint_config(const std::filesystem::path& path);

/// Live source over a streaming chat-completions request. A background
/// thread reads the server-sent events; at most `buffer` deltas wait ahead
/// of the consumer. cancel() drops the connection.
class EndpointSource : public TokenSource {
 public:
  ~EndpointSource() override;

  std::optional<TokenEvent> next() override;
  void cancel() override;

  /// Everything delivered so far, as a replayable trace.
  TraceRecord transcript() const;

 private:
  friend std::unique_ptr<EndpointSource> open_stream(const EndpointConfig&, const std::string&,
                                                     const std::string&, Language);
  struct Shared;
  EndpointSource() = default;

  std::shared_ptr<Shared> shared_;
};

/// Starts the request. Throws ConfigurationError for a bad config or an
/// empty prompt; connection problems surface from next() as SourceError.
std::unique_ptr<EndpointSource> open_stream(const EndpointConfig& endpoint, const std::string& prompt,
                                            const std::string& problem_id, Language language);

}  // namespace stopgen

#endif  // STOPGEN_STREAM_SOURCES_HPP_
