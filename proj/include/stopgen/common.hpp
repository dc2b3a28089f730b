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

// Shared vocabulary: object languages and the error hierarchy.

#ifndef STOPGEN_COMMON_HPP_
#define STOPGEN_COMMON_HPP_

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stopgen {

/// The language the model is generating code in.
enum class Language { kPython, kJava };

/// "python" / "java", the spelling used in trace and bundle files.
std::string_view to_string(Language lang);

/// Inverse of to_string; throws ParseError on anything else.
Language parse_language(std::string_view name);

using Clock = std::chrono::steady_clock;
using Nanos = std::chrono::nanoseconds;

/// Root of all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The configured toolchain cannot be used (missing binary, bad config).
/// Aborts a session; never folded into a verdict or test outcome.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Caller violated the token-stream protocol (index gap, call after stop).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. The message carries the file location.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A token source failed mid-stream (connection loss, bad status).
class SourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace stopgen

#endif  // STOPGEN_COMMON_HPP_
