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

#include "stopgen/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <mutex>
#include <utility>

extern char** environ;

namespace stopgen {
namespace {

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  ~Fd() { reset(); }

  int get() const { return fd_; }
  explicit operator bool() const { return fd_ >= 0; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

struct Pipe {
  Fd read;
  Fd write;
};

Pipe make_pipe() {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) {
    throw Error(std::string("pipe2 failed: ") + std::strerror(errno));
  }
  return {Fd(fds[0]), Fd(fds[1])};
}

void set_nonblocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK); }

bool credential_like(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (std::string_view marker : {"TOKEN", "SECRET", "PASSWORD", "PASSWD", "API_KEY", "APIKEY",
                                  "CREDENTIAL", "PRIVATE_KEY", "AWS_"}) {
    if (upper.find(marker) != std::string::npos) return true;
  }
  return false;
}

// Reads whatever is available; returns false on EOF.
bool drain(int fd, std::string& sink, std::size_t limit) {
  char buf[8192];
  for (;;) {
    ssize_t n = ::read(fd, buf, sizeof buf);
    if (n > 0) {
      std::size_t room = limit > sink.size() ? limit - sink.size() : 0;
      sink.append(buf, std::min(room, static_cast<std::size_t>(n)));
      continue;
    }
    if (n == 0) return false;
    if (errno == EINTR) continue;
    return errno == EAGAIN || errno == EWOULDBLOCK;
  }
}

}  // namespace

std::optional<std::filesystem::path> find_program(const std::string& name) {
  if (name.empty()) return std::nullopt;
  auto executable = [](const std::filesystem::path& p) {
    struct stat st {};
    return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
  };
  if (name.find('/') != std::string::npos) {
    if (executable(name)) return std::filesystem::path(name);
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  std::string_view dirs = path ? path : "/usr/local/bin:/usr/bin:/bin";
  while (!dirs.empty()) {
    std::size_t colon = dirs.find(':');
    std::string_view dir = dirs.substr(0, colon);
    std::filesystem::path candidate = std::filesystem::path(dir.empty() ? "." : std::string(dir)) / name;
    if (executable(candidate)) return candidate;
    if (colon == std::string_view::npos) break;
    dirs.remove_prefix(colon + 1);
  }
  return std::nullopt;
}

std::vector<std::string> filtered_environment(const std::vector<std::string>& overrides) {
  std::vector<std::string> env;
  auto name_of = [](std::string_view kv) { return kv.substr(0, kv.find('=')); };
  for (char** e = environ; e && *e; ++e) {
    std::string_view kv(*e);
    if (credential_like(name_of(kv))) continue;
    bool overridden = std::any_of(overrides.begin(), overrides.end(), [&](const std::string& o) {
      return name_of(o) == name_of(kv);
    });
    if (!overridden) env.emplace_back(kv);
  }
  env.insert(env.end(), overrides.begin(), overrides.end());
  return env;
}

ProcessResult run_process(const ProcessSpec& spec) {
  ignore_sigpipe_once();
  if (spec.argv.empty()) throw ConfigurationError("empty command line");
  auto program = find_program(spec.argv.front());
  if (!program) {
    throw ConfigurationError("toolchain program not found or not executable: " + spec.argv.front());
  }

  // Everything the child touches is prepared before fork().
  std::vector<std::string> env = filtered_environment(spec.env_overrides);
  std::vector<char*> argv;
  for (const auto& a : spec.argv) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  std::vector<char*> envp;
  for (auto& e : env) envp.push_back(e.data());
  envp.push_back(nullptr);
  const std::string cwd = spec.cwd.string();
  const std::string exe = program->string();

  Pipe in = make_pipe();
  Pipe out = make_pipe();
  Pipe err = make_pipe();
  Pipe status = make_pipe();

  const auto started = Clock::now();
  pid_t pid = ::fork();
  if (pid < 0) throw Error(std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in.read.get(), STDIN_FILENO);
    ::dup2(out.write.get(), STDOUT_FILENO);
    ::dup2(err.write.get(), STDERR_FILENO);
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) {
      int e = errno;
      (void)!::write(status.write.get(), &e, sizeof e);
      ::_exit(127);
    }
    ::execve(exe.c_str(), argv.data(), envp.data());
    int e = errno;
    (void)!::write(status.write.get(), &e, sizeof e);
    ::_exit(127);
  }
  ::setpgid(pid, pid);  // both sides set it; whichever runs first wins
  in.read.reset();
  out.write.reset();
  err.write.reset();
  status.write.reset();

  int exec_errno = 0;
  ssize_t got = ::read(status.read.get(), &exec_errno, sizeof exec_errno);
  if (got == static_cast<ssize_t>(sizeof exec_errno)) {
    int ws = 0;
    ::waitpid(pid, &ws, 0);
    throw ConfigurationError("cannot execute '" + spec.argv.front() + "': " + std::strerror(exec_errno));
  }

  ProcessResult result;
  set_nonblocking(out.read.get());
  set_nonblocking(err.read.get());
  std::string_view pending;
  if (spec.stdin_data) {
    pending = *spec.stdin_data;
    set_nonblocking(in.write.get());
  } else {
    in.write.reset();
  }

  const auto deadline = started + spec.timeout;
  bool out_open = true;
  bool err_open = true;
  bool exited = false;
  int wait_status = 0;
  while (!exited) {
    if (pid_t w = ::waitpid(pid, &wait_status, WNOHANG); w == pid) {
      exited = true;
      break;
    }
    const auto now = Clock::now();
    if (now >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &wait_status, 0);
      result.timed_out = true;
      exited = true;
      break;
    }
    std::vector<pollfd> fds;
    if (out_open) fds.push_back({out.read.get(), POLLIN, 0});
    if (err_open) fds.push_back({err.read.get(), POLLIN, 0});
    if (in.write) fds.push_back({in.write.get(), POLLOUT, 0});
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    int wait_ms = static_cast<int>(std::clamp<long long>(left, 1, 20));
    if (fds.empty()) {
      ::usleep(static_cast<useconds_t>(wait_ms) * 1000);
      continue;
    }
    if (::poll(fds.data(), fds.size(), wait_ms) < 0 && errno != EINTR) break;
    for (const auto& p : fds) {
      if (p.revents == 0) continue;
      if (p.fd == out.read.get()) out_open = drain(p.fd, result.out, spec.output_limit);
      if (p.fd == err.read.get()) err_open = drain(p.fd, result.err, spec.output_limit);
      if (in.write && p.fd == in.write.get()) {
        if (p.revents & (POLLERR | POLLHUP)) {
          in.write.reset();
          continue;
        }
        ssize_t n = ::write(p.fd, pending.data(), pending.size());
        if (n > 0) pending.remove_prefix(static_cast<std::size_t>(n));
        if (pending.empty() || (n < 0 && errno != EAGAIN && errno != EINTR)) in.write.reset();
      }
    }
  }
  // Collect what the child left in the pipes, then reap stragglers that
  // inherited them so reads cannot block forever.
  if (!result.timed_out) ::kill(-pid, SIGKILL);
  if (out_open) drain(out.read.get(), result.out, spec.output_limit);
  if (err_open) drain(err.read.get(), result.err, spec.output_limit);
  result.duration = std::chrono::duration_cast<Nanos>(Clock::now() - started);
  if (!result.timed_out) {
    if (WIFEXITED(wait_status)) result.exit_code = WEXITSTATUS(wait_status);
    if (WIFSIGNALED(wait_status)) result.term_signal = WTERMSIG(wait_status);
  }
  return result;
}

ScratchArea::ScratchArea(std::filesystem::path root, std::string session_id)
    : dir_(std::move(root) / session_id), session_id_(std::move(session_id)) {}

ScratchArea::~ScratchArea() {
  std::error_code ec;
  std::filesystem::remove(dir_, ec);  // fails harmlessly unless empty
}

std::filesystem::path ScratchArea::next_attempt() {
  auto p = dir_ / ("attempt-" + std::to_string(attempts_.fetch_add(1)));
  std::filesystem::create_directories(p);
  return p;
}

std::filesystem::path ScratchArea::next_check() {
  auto p = dir_ / ("check-" + std::to_string(checks_.fetch_add(1)));
  std::filesystem::create_directories(p);
  return p;
}

std::string make_session_id(std::string_view hint) {
  static std::atomic<unsigned long> counter{0};
  std::string safe;
  for (char c : hint.substr(0, 48)) {
    safe += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  }
  if (safe.empty()) safe = "session";
  return safe + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter.fetch_add(1));
}

}  // namespace stopgen
