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

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "stopgen/stream_sources.hpp"
#include "test_env.hpp"

namespace {

using namespace stopgen;
using namespace stopgen_test;
using json = nlohmann::json;

TraceRecord sample_trace() {
  TraceRecord r;
  r.problem_id = "python/square";
  r.model_id = "m";
  r.language = Language::kPython;
  r.tokens = {"def", " square", "(x):\n", "    return x * x\n"};
  r.timestamps_ns = std::vector<std::int64_t>{0, 20'000'000, 40'000'000, 60'000'000};
  r.terminal = TraceTerminal::kEos;
  r.temperature = 0.1;
  r.top_p = 0.95;
  return r;
}

std::vector<TokenEvent> drain(TokenSource& s) {
  std::vector<TokenEvent> out;
  while (auto e = s.next()) out.push_back(*e);
  return out;
}

// ---------------------------------------------------------------- traces

TEST(Trace, RoundTrip) {
  const TraceRecord r = sample_trace();
  const std::string line = serialize_trace(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const TraceRecord back = parse_trace(line);
  EXPECT_EQ(back.tokens, r.tokens);
  EXPECT_EQ(back.timestamps_ns, r.timestamps_ns);
  EXPECT_EQ(back.terminal, r.terminal);
  EXPECT_EQ(serialize_trace(back), line);
}

TEST(Trace, RejectsBadRecords) {
  json good = json::parse(serialize_trace(sample_trace()));
  auto bad = [&](auto mutate) {
    json j = good;
    mutate(j);
    EXPECT_THROW(parse_trace(j.dump()), ParseError) << j.dump();
  };
  bad([](json& j) { j["extra"] = 1; });
  bad([](json& j) { j.erase("temperature"); });
  bad([](json& j) { j.erase("top_p"); });
  bad([](json& j) { j["terminal"] = "stopped"; });
  bad([](json& j) { j["language"] = "cobol"; });
  bad([](json& j) { j["timestamps_ns"] = {0, 1}; });
  bad([](json& j) { j["timestamps_ns"] = {0, 5, 3, 9}; });
  bad([](json& j) {
    j["tokens"] = json::array();
    j.erase("timestamps_ns");
    j["terminal"] = "cap";
  });
  EXPECT_THROW(parse_trace("not json"), ParseError);
}

TEST(Trace, FileErrorsNameTheLine) {
  const auto dir = temp_dir("traces");
  const auto path = dir / "t.jsonl";
  {
    std::ofstream out(path);
    out << serialize_trace(sample_trace()) << "\n\n{\"problem_id\": 3}\n";
  }
  try {
    read_traces(path);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("t.jsonl:3"), std::string::npos) << e.what();
  }
}

TEST(Trace, WriteThenRead) {
  const auto path = temp_dir("traces") / "t.jsonl";
  TraceRecord a = sample_trace();
  TraceRecord b = sample_trace();
  b.problem_id = "python/add";
  b.timestamps_ns.reset();
  b.terminal = TraceTerminal::kCapHit;
  write_traces(path, {a, b});
  auto back = read_traces(path);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].problem_id, "python/add");
  EXPECT_FALSE(back[1].timestamps_ns.has_value());
  EXPECT_EQ(open_replay(path, std::string("python/add"))->record().problem_id, "python/add");
  EXPECT_THROW(open_replay(path), Error);
  EXPECT_THROW(open_replay(path, std::string("python/none")), Error);
}

// ---------------------------------------------------------------- replay

TEST(Replay, EosTrace) {
  ReplaySource s(sample_trace());
  auto evs = drain(s);
  ASSERT_EQ(evs.size(), 5u);
  for (std::size_t i = 0; i < evs.size(); ++i) EXPECT_EQ(evs[i].index, i);
  EXPECT_TRUE(evs.back().is_eos);
  EXPECT_TRUE(evs.back().text.empty());
  EXPECT_FALSE(s.next().has_value());
}

TEST(Replay, CapTraceEndsWithoutEos) {
  TraceRecord r = sample_trace();
  r.terminal = TraceTerminal::kCapHit;
  ReplaySource s(r);
  auto evs = drain(s);
  ASSERT_EQ(evs.size(), 4u);
  EXPECT_FALSE(evs.back().is_eos);
}

TEST(Replay, CancelStops) {
  ReplaySource s(sample_trace());
  s.next();
  s.cancel();
  EXPECT_FALSE(s.next().has_value());
  EXPECT_TRUE(s.cancelled());
}

TEST(Replay, PacingFollowsTimestamps) {
  ReplayOptions o;
  o.pacing = true;
  ReplaySource s(sample_trace(), o);
  const auto t0 = Clock::now();
  drain(s);
  EXPECT_GE(Clock::now() - t0, std::chrono::milliseconds(60));
}

TEST(Replay, Deterministic) {
  ReplaySource a(sample_trace()), b(sample_trace());
  auto ea = drain(a), eb = drain(b);
  ASSERT_EQ(ea.size(), eb.size());
  for (std::size_t i = 0; i < ea.size(); ++i) {
    EXPECT_EQ(ea[i].text, eb[i].text);
    EXPECT_EQ(ea[i].is_eos, eb[i].is_eos);
  }
}

// -------------------------------------------------------------- endpoint

TEST(EndpointConfig, ParseAndValidate) {
  EndpointConfig c = parse_endpoint_config(
      R"({"base_url": "http://127.0.0.1:9/v1", "model": "m", "max_tokens": 500, "buffer": 2, "request_timeout_s": 5})");
  EXPECT_EQ(c.model, "m");
  EXPECT_EQ(c.max_tokens, 500u);
  EXPECT_EQ(c.buffer, 2u);
  EXPECT_EQ(c.request_timeout, std::chrono::seconds(5));
  EXPECT_NO_THROW(c.validate(1000));
  EXPECT_THROW(parse_endpoint_config("{}"), ConfigurationError);
  c.buffer = 0;
  EXPECT_THROW(c.validate(1000), ConfigurationError);
}

std::string sse(const std::string& delta, const char* finish = nullptr) {
  json j;
  j["choices"] = json::array({json{{"index", 0}, {"delta", {{"content", delta}}}}});
  if (finish) j["choices"][0]["finish_reason"] = finish;
  return "data: " + j.dump() + "\n\n";
}

// A chat-completions server that streams `deltas` one event at a time.
class MockEndpoint {
 public:
  std::vector<std::string> deltas;
  std::string ending = "data: [DONE]\n\n";
  int status = 200;
  std::chrono::milliseconds gap{0};

  std::atomic<int> written{0};
  std::atomic<bool> client_gone{false};
  std::string last_body;
  std::string last_auth;

  MockEndpoint() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      last_body = req.body;
      last_auth = req.get_header_value("Authorization");
      if (status != 200) {
        res.status = status;
        res.set_content(R"({"error": "overloaded"})", "application/json");
        return;
      }
      res.set_chunked_content_provider("text/event-stream", [this](std::size_t, httplib::DataSink& sink) {
        const int i = written.load();
        if (i < static_cast<int>(deltas.size())) {
          if (gap.count()) std::this_thread::sleep_for(gap);
          const std::string ev = sse(deltas[i]);
          if (!sink.is_writable() || !sink.write(ev.data(), ev.size())) {
            client_gone = true;
            return false;
          }
          ++written;
          return true;
        }
        sink.write(ending.data(), ending.size());
        sink.done();
        return true;
      });
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockEndpoint() {
    server_.stop();
    thread_.join();
  }

  EndpointConfig config() const {
    EndpointConfig c;
    c.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1";
    c.model = "mock";
    c.auth_env = "STOPGEN_TEST_KEY";
    c.request_timeout = std::chrono::seconds(5);
    return c;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(Endpoint, StreamsDeltasThenEos) {
  MockEndpoint m;
  m.deltas = {"def", " square", "(x):\n", "    return x * x\n"};
  ::setenv("STOPGEN_TEST_KEY", "sekrit", 1);
  auto src = open_stream(m.config(), "Write square.", "python/square", Language::kPython);
  auto evs = drain(*src);
  ASSERT_EQ(evs.size(), 5u);
  EXPECT_EQ(evs[1].text, " square");
  EXPECT_TRUE(evs.back().is_eos);
  TraceRecord t = src->transcript();
  EXPECT_EQ(t.tokens, m.deltas);
  EXPECT_EQ(t.terminal, TraceTerminal::kEos);
  ASSERT_TRUE(t.timestamps_ns.has_value());
  EXPECT_EQ(t.timestamps_ns->size(), 4u);
  EXPECT_NO_THROW(t.validate());

  json body = json::parse(m.last_body);
  EXPECT_EQ(body["stream"], true);
  EXPECT_EQ(body["model"], "mock");
  EXPECT_EQ(body["max_tokens"], 1000);
  EXPECT_EQ(body["messages"].back()["content"], "Write square.");
  EXPECT_EQ(m.last_auth, "Bearer sekrit");
  ::unsetenv("STOPGEN_TEST_KEY");
}

TEST(Endpoint, LengthFinishIsACapNotEos) {
  MockEndpoint m;
  m.deltas = {"a", "b"};
  m.ending = sse("c", "length");
  auto src = open_stream(m.config(), "p", "x", Language::kPython);
  auto evs = drain(*src);
  ASSERT_EQ(evs.size(), 3u);
  EXPECT_FALSE(evs.back().is_eos);
  EXPECT_EQ(src->transcript().terminal, TraceTerminal::kCapHit);
}

TEST(Endpoint, CancelDisconnectsAndDeliversNothingMore) {
  MockEndpoint m;
  for (int i = 0; i < 200; ++i) m.deltas.push_back("t" + std::to_string(i));
  m.gap = std::chrono::milliseconds(5);
  auto src = open_stream(m.config(), "p", "x", Language::kPython);
  for (std::size_t i = 0; i <= 5; ++i) {
    auto e = src->next();
    ASSERT_TRUE(e.has_value());
    EXPECT_EQ(e->index, i);
  }
  src->cancel();
  EXPECT_FALSE(src->next().has_value());
  EXPECT_EQ(src->transcript().tokens.size(), 6u);
  const auto deadline = Clock::now() + std::chrono::seconds(5);
  while (!m.client_gone && Clock::now() < deadline) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  EXPECT_TRUE(m.client_gone);
  // Buffer of one: the server got at most a socket's worth ahead, never the whole stream.
  EXPECT_LT(m.written.load(), 200);
}

TEST(Endpoint, HttpErrorSurfacesFromNext) {
  MockEndpoint m;
  m.status = 503;
  auto src = open_stream(m.config(), "p", "x", Language::kPython);
  try {
    src->next();
    FAIL();
  } catch (const SourceError& e) {
    EXPECT_NE(std::string(e.what()).find("503"), std::string::npos) << e.what();
  }
}

TEST(Endpoint, ConnectionRefusedSurfacesFromNext) {
  EndpointConfig c;
  c.base_url = "http://127.0.0.1:1/v1";
  c.model = "m";
  c.request_timeout = std::chrono::seconds(2);
  auto src = open_stream(c, "p", "x", Language::kPython);
  EXPECT_THROW(src->next(), SourceError);
}

TEST(Endpoint, EmptyPromptIsAConfigurationError) {
  EndpointConfig c;
  c.base_url = "http://127.0.0.1:1/v1";
  c.model = "m";
  EXPECT_THROW(open_stream(c, "", "x", Language::kPython), ConfigurationError);
}

}  // namespace
