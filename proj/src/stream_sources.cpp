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

#include "stopgen/stream_sources.hpp"

#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace stopgen {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void TraceRecord::validate() const {
  if (problem_id.empty()) throw ParseError("trace without problem_id");
  if (tokens.empty() && terminal != TraceTerminal::kEos) {
    throw ParseError(problem_id + ": empty trace must end with eos");
  }
  if (timestamps_ns) {
    if (timestamps_ns->size() != tokens.size()) {
      throw ParseError(problem_id + ": " + std::to_string(timestamps_ns->size()) + " timestamps for " +
                       std::to_string(tokens.size()) + " tokens");
    }
    for (std::size_t i = 1; i < timestamps_ns->size(); ++i) {
      if ((*timestamps_ns)[i] < (*timestamps_ns)[i - 1]) {
        throw ParseError(problem_id + ": timestamps decrease at token " + std::to_string(i));
      }
    }
  }
}

TraceRecord parse_trace(const std::string& line, const std::string& origin) {
  static const std::set<std::string> kKeys = {"problem_id", "model_id", "language", "tokens",
                                              "timestamps_ns", "terminal", "temperature", "top_p"};
  TraceRecord r;
  try {
    json j = json::parse(line);
    if (!j.is_object()) throw ParseError("record is not an object");
    for (const auto& [k, v] : j.items()) {
      if (!kKeys.count(k)) throw ParseError("unknown field '" + k + "'");
    }
    r.problem_id = j.at("problem_id").get<std::string>();
    r.model_id = j.at("model_id").get<std::string>();
    r.language = parse_language(j.at("language").get<std::string>());
    r.tokens = j.at("tokens").get<std::vector<std::string>>();
    if (j.contains("timestamps_ns") && !j["timestamps_ns"].is_null()) {
      r.timestamps_ns = j["timestamps_ns"].get<std::vector<std::int64_t>>();
    }
    const std::string terminal = j.at("terminal").get<std::string>();
    if (terminal == "eos") {
      r.terminal = TraceTerminal::kEos;
    } else if (terminal == "cap") {
      r.terminal = TraceTerminal::kCapHit;
    } else {
      throw ParseError("terminal must be \"eos\" or \"cap\", got \"" + terminal + "\"");
    }
    r.temperature = j.at("temperature").get<double>();
    r.top_p = j.at("top_p").get<double>();
    r.validate();
  } catch (const json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return r;
}

std::string serialize_trace(const TraceRecord& r) {
  ordered_json j;
  j["problem_id"] = r.problem_id;
  j["model_id"] = r.model_id;
  j["language"] = std::string(to_string(r.language));
  j["tokens"] = r.tokens;
  if (r.timestamps_ns) j["timestamps_ns"] = *r.timestamps_ns;
  j["terminal"] = r.terminal == TraceTerminal::kEos ? "eos" : "cap";
  j["temperature"] = r.temperature;
  j["top_p"] = r.top_p;
  return j.dump();
}

std::vector<TraceRecord> read_traces(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read trace file " + path.string());
  std::vector<TraceRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_trace(line, path.string() + ":" + std::to_string(line_no)));
  }
  return out;
}

void append_trace(std::ostream& out, const TraceRecord& record) { out << serialize_trace(record) << '\n'; }

void write_traces(const std::filesystem::path& path, const std::vector<TraceRecord>& records) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& r : records) append_trace(out, r);
}

ReplaySource::ReplaySource(TraceRecord record, ReplayOptions options)
    : record_(std::move(record)), options_(options) {
  record_.validate();
}

std::optional<TokenEvent> ReplaySource::next() {
  if (cancelled_) return std::nullopt;
  if (pos_ < record_.tokens.size()) {
    if (options_.pacing && record_.timestamps_ns) {
      if (pos_ == 0) start_ = Clock::now();
      const auto offset = Nanos((*record_.timestamps_ns)[pos_] - record_.timestamps_ns->front());
      std::this_thread::sleep_until(start_ + offset);
    }
    TokenEvent ev{pos_, record_.tokens[pos_], false, Clock::now()};
    ++pos_;
    return ev;
  }
  if (record_.terminal == TraceTerminal::kEos && !eos_sent_) {
    eos_sent_ = true;
    return TokenEvent{pos_, "", true, Clock::now()};
  }
  return std::nullopt;
}

std::unique_ptr<ReplaySource> open_replay(const std::filesystem::path& path,
                                          const std::optional<std::string>& problem_id, ReplayOptions options) {
  auto records = read_traces(path);
  if (problem_id) {
    for (auto& r : records) {
      if (r.problem_id == *problem_id) return std::make_unique<ReplaySource>(std::move(r), options);
    }
    throw ParseError(path.string() + ": no trace for problem " + *problem_id);
  }
  if (records.size() != 1) {
    throw ParseError(path.string() + ": expected one trace, found " + std::to_string(records.size()) +
                     " (name a problem id)");
  }
  return std::make_unique<ReplaySource>(std::move(records.front()), options);
}

void EndpointConfig::validate(std::size_t max_output_tokens) const {
  if (base_url.rfind("http://", 0) != 0 && base_url.rfind("https://", 0) != 0) {
    throw ConfigurationError("endpoint base_url must start with http:// or https://");
  }
  if (model.empty()) throw ConfigurationError("endpoint model is empty");
  if (max_tokens < 1 || max_tokens > max_output_tokens) {
    throw ConfigurationError("endpoint max_tokens must be in [1, " + std::to_string(max_output_tokens) + "]");
  }
  if (buffer < 1) throw ConfigurationError("endpoint buffer must be at least 1");
  if (request_timeout <= Nanos::zero()) throw ConfigurationError("endpoint request timeout must be positive");
}

EndpointConfig parse_endpoint_config(const std::string& json_text, const std::string& origin) {
  EndpointConfig c;
  try {
    json j = json::parse(json_text);
    c.base_url = j.at("base_url").get<std::string>();
    c.model = j.at("model").get<std::string>();
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.temperature = j.value("temperature", c.temperature);
    c.top_p = j.value("top_p", c.top_p);
    c.auth_env = j.value("auth_env", c.auth_env);
    c.buffer = j.value("buffer", c.buffer);
    if (j.contains("request_timeout_s")) {
      c.request_timeout = std::chrono::duration_cast<Nanos>(
          std::chrono::duration<double>(j["request_timeout_s"].get<double>()));
    }
    if (j.contains("system_prompt")) c.system_prompt = j["system_prompt"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigurationError(origin + ": " + e.what());
  }
  return c;
}

EndpointConfig load_endpoint_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read endpoint config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_endpoint_config(buf.str(), path.string());
}

struct EndpointSource::Shared {
  struct Item {
    enum class Kind { kText, kEos, kCap, kError } kind;
    std::string text;
  };

  std::mutex mu;
  std::condition_variable cv;
  std::deque<Item> queue;
  std::size_t capacity = 1;
  bool cancelled = false;
  bool finished = false;  // producer is done; nothing more will be queued
  bool done = false;      // consumer saw a terminal item

  std::unique_ptr<httplib::Client> client;
  std::thread worker;

  TraceRecord transcript;
  Clock::time_point start;
  std::size_t delivered = 0;

  // Producer side. Returns false once cancelled.
  bool push(Item item) {
    std::unique_lock lock(mu);
    if (item.kind == Item::Kind::kText) {
      cv.wait(lock, [&] { return cancelled || queue.size() < capacity; });
    }
    if (cancelled) return false;
    queue.push_back(std::move(item));
    cv.notify_all();
    return true;
  }
};

namespace {

// Splits "http://host:port/prefix" into the client address and path prefix.
std::pair<std::string, std::string> split_url(const std::string& url) {
  std::size_t scheme_end = url.find("://");
  std::size_t path = url.find('/', scheme_end + 3);
  if (path == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path), prefix};
}

}  // namespace

std::unique_ptr<EndpointSource> open_stream(const EndpointConfig& endpoint, const std::string& prompt,
                                            const std::string& problem_id, Language language) {
  endpoint.validate(endpoint.max_tokens);
  if (prompt.empty()) throw ConfigurationError("empty prompt");
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (endpoint.base_url.rfind("https://", 0) == 0) {
    throw ConfigurationError("https endpoints need a build with OpenSSL");
  }
#endif

  std::unique_ptr<EndpointSource> src(new EndpointSource());
  auto sh = std::make_shared<EndpointSource::Shared>();
  src->shared_ = sh;
  sh->capacity = endpoint.buffer;
  sh->transcript.problem_id = problem_id;
  sh->transcript.model_id = endpoint.model;
  sh->transcript.language = language;
  sh->transcript.temperature = endpoint.temperature;
  sh->transcript.top_p = endpoint.top_p;
  sh->transcript.terminal = TraceTerminal::kCapHit;
  sh->transcript.timestamps_ns.emplace();
  sh->start = Clock::now();

  auto [address, prefix] = split_url(endpoint.base_url);
  sh->client = std::make_unique<httplib::Client>(address);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.request_timeout).count();
  sh->client->set_connection_timeout(std::max<long>(1, secs), 0);
  sh->client->set_read_timeout(std::max<long>(1, secs), 0);

  json body;
  body["model"] = endpoint.model;
  body["stream"] = true;
  body["max_tokens"] = endpoint.max_tokens;
  body["temperature"] = endpoint.temperature;
  body["top_p"] = endpoint.top_p;
  body["messages"] = json::array();
  if (endpoint.system_prompt) body["messages"].push_back({{"role", "system"}, {"content", *endpoint.system_prompt}});
  body["messages"].push_back({{"role", "user"}, {"content", prompt}});

  httplib::Headers headers = {{"Accept", "text/event-stream"}};
  if (!endpoint.auth_env.empty()) {
    if (const char* token = std::getenv(endpoint.auth_env.c_str()); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }

  sh->worker = std::thread([sh, path = prefix + "/chat/completions", headers, payload = body.dump()] {
    using Item = EndpointSource::Shared::Item;
    int status = 0;
    std::string error_body;
    std::string pending;
    bool terminal = false;
    bool failed = false;

    auto handle_event = [&](const std::string& data) -> bool {
      if (data == "[DONE]") {
        terminal = true;
        return sh->push({Item::Kind::kEos, {}});
      }
      json j;
      try {
        j = json::parse(data);
      } catch (const json::exception&) {
        failed = true;
        sh->push({Item::Kind::kError, "malformed stream event: " + data.substr(0, 200)});
        return false;
      }
      if (j.contains("error")) {
        failed = true;
        sh->push({Item::Kind::kError, "endpoint error: " + j["error"].dump().substr(0, 500)});
        return false;
      }
      if (!j.contains("choices") || j["choices"].empty()) return true;
      const auto& choice = j["choices"][0];
      if (choice.contains("delta") && choice["delta"].contains("content") && choice["delta"]["content"].is_string()) {
        std::string text = choice["delta"]["content"].get<std::string>();
        if (!text.empty() && !sh->push({Item::Kind::kText, std::move(text)})) return false;
      }
      if (choice.contains("finish_reason") && choice["finish_reason"].is_string()) {
        terminal = true;
        const bool cap = choice["finish_reason"] == "length";
        return sh->push({cap ? Item::Kind::kCap : Item::Kind::kEos, {}});
      }
      return true;
    };

    httplib::Request req;
    req.method = "POST";
    req.path = path;
    req.headers = headers;
    req.body = payload;
    req.set_header("Content-Type", "application/json");
    req.response_handler = [&](const httplib::Response& res) {
      status = res.status;
      return true;
    };
    req.content_receiver = [&](const char* data, std::size_t len, std::uint64_t, std::uint64_t) {
      if (status != 200) {
        if (error_body.size() < 2000) error_body.append(data, std::min<std::size_t>(len, 2000));
        return true;
      }
      if (terminal) return true;
      pending.append(data, len);
      for (;;) {
        std::size_t nl = pending.find('\n');
        if (nl == std::string::npos) break;
        std::string line = pending.substr(0, nl);
        pending.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("data:", 0) != 0) continue;  // blank separators, comments, event names
        std::string payload_line = line.substr(5);
        if (!payload_line.empty() && payload_line.front() == ' ') payload_line.erase(0, 1);
        if (!handle_event(payload_line)) return false;
        if (terminal) return true;
      }
      return true;
    };

    httplib::Response res;
    httplib::Error err = httplib::Error::Success;
    const bool ok = sh->client->send(req, res, err);
    {
      std::lock_guard lock(sh->mu);
      if (sh->cancelled) {
        sh->finished = true;
        sh->cv.notify_all();
        return;
      }
    }
    if (!failed) {
      if (status != 0 && status != 200) {
        sh->push({Item::Kind::kError, "endpoint returned HTTP " + std::to_string(status) + ": " + error_body});
      } else if (!ok) {
        sh->push({Item::Kind::kError, "stream failed: " + httplib::to_string(err)});
      } else if (!terminal) {
        sh->push({Item::Kind::kError, "stream ended without a finish marker"});
      }
    }
    std::lock_guard lock(sh->mu);
    sh->finished = true;
    sh->cv.notify_all();
  });
  return src;
}

std::optional<TokenEvent> EndpointSource::next() {
  using Item = Shared::Item;
  auto& sh = *shared_;
  std::unique_lock lock(sh.mu);
  if (sh.done) return std::nullopt;
  sh.cv.wait(lock, [&] { return sh.cancelled || !sh.queue.empty() || sh.finished; });
  if (sh.cancelled || sh.queue.empty()) return std::nullopt;
  Item item = std::move(sh.queue.front());
  sh.queue.pop_front();
  sh.cv.notify_all();
  const auto now = Clock::now();
  switch (item.kind) {
    case Item::Kind::kText: {
      TokenEvent ev{sh.delivered++, std::move(item.text), false, now};
      sh.transcript.tokens.push_back(ev.text);
      sh.transcript.timestamps_ns->push_back(std::chrono::duration_cast<Nanos>(now - sh.start).count());
      return ev;
    }
    case Item::Kind::kEos:
      sh.done = true;
      sh.transcript.terminal = TraceTerminal::kEos;
      return TokenEvent{sh.delivered, "", true, now};
    case Item::Kind::kCap:
      sh.done = true;
      return std::nullopt;
    case Item::Kind::kError:
      sh.done = true;
      throw SourceError(item.text);
  }
  return std::nullopt;
}

void EndpointSource::cancel() {
  if (!shared_) return;
  {
    std::lock_guard lock(shared_->mu);
    if (shared_->cancelled) return;
    shared_->cancelled = true;
    shared_->cv.notify_all();
  }
  shared_->client->stop();
}

EndpointSource::~EndpointSource() {
  if (!shared_) return;
  cancel();
  if (shared_->worker.joinable()) shared_->worker.join();
}

TraceRecord EndpointSource::transcript() const {
  std::lock_guard lock(shared_->mu);
  return shared_->transcript;
}

}  // namespace stopgen
