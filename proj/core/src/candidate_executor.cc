// Copyright 2026 The LLaMEA-cpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "llamea/candidate_executor.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <mutex>
#include <utility>

#include "json.hpp"
#include "llamea/errors.h"

extern char** environ;

namespace llamea {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

// A stdout line longer than this is treated as protocol garbage.
constexpr size_t kMaxLineBytes = size_t{16} << 20;
// How long a shim may linger after its final message before it is killed.
constexpr std::chrono::milliseconds kExitGrace{2000};

class UniqueFd {
 public:
  explicit UniqueFd(int fd = -1) : fd_(fd) {}
  UniqueFd(const UniqueFd&) = delete;
  UniqueFd& operator=(const UniqueFd&) = delete;
  ~UniqueFd() { Reset(); }
  int get() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void Reset(int fd = -1) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = fd;
  }

 private:
  int fd_;
};

struct Pipe {
  UniqueFd read;
  UniqueFd write;
};

void MakePipe(Pipe& p) {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) {
    throw std::runtime_error(std::string("pipe2: ") + std::strerror(errno));
  }
  p.read.Reset(fds[0]);
  p.write.Reset(fds[1]);
}

void SetNonBlocking(int fd) {
  const int flags = ::fcntl(fd, F_GETFL);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

void IgnoreSigpipe() {
  // A shim that dies mid-session must surface as EPIPE, not kill the host.
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

int MillisLeft(Clock::time_point deadline) {
  const auto left =
      std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  return static_cast<int>(std::max<int64_t>(0, std::min<int64_t>(left.count(), 1 << 30)));
}

// Appends to `tail`, keeping at most `cap` trailing bytes.
void AppendTail(std::string& tail, const char* data, size_t n, size_t cap) {
  tail.append(data, n);
  if (tail.size() > cap) tail.erase(0, tail.size() - cap);
}

// Reads what is available; returns false on EOF or hard error.
bool ReadSome(int fd, std::string& into, size_t tail_cap = 0) {
  std::array<char, 65536> buf;
  for (;;) {
    const ssize_t n = ::read(fd, buf.data(), buf.size());
    if (n > 0) {
      if (tail_cap > 0) {
        AppendTail(into, buf.data(), static_cast<size_t>(n), tail_cap);
      } else {
        into.append(buf.data(), static_cast<size_t>(n));
      }
      continue;
    }
    if (n == 0) return false;
    if (errno == EINTR) continue;
    return errno == EAGAIN || errno == EWOULDBLOCK;
  }
}

std::string Trim(std::string_view s) {
  const size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<Trajectory> MakeTrajectory(const ExecutionSpec& spec,
                                         PrecisionTrace trace) {
  if (trace.empty()) return std::nullopt;
  return PadTrajectory(spec.fid, spec.iid, spec.seed, std::move(trace), spec.budget);
}

// One host-side protocol session with a spawned shim.
class Session {
 public:
  Session(const ExecutionSpec& spec, BudgetedEvaluator& evaluator)
      : spec_(spec), evaluator_(evaluator) {}

  enum class End { kNone, kDone, kError, kProtocol, kEof, kTimeout };

  // Handles one complete stdout line; may queue a reply.
  void HandleLine(std::string_view line, std::string& outbox) {
    json msg = json::parse(line.begin(), line.end(), nullptr, false);
    if (msg.is_discarded() || !msg.is_object() || msg.size() != 1) {
      return Violation("malformed message");
    }
    const auto& [key, body] = *msg.items().begin();
    if (key == "eval") {
      if (!body.is_object() || !body.contains("x") || !body["x"].is_array()) {
        return Violation("eval without an x array");
      }
      const json& xs = body["x"];
      if (static_cast<int>(xs.size()) != spec_.dim) {
        return Violation("eval vector has " + std::to_string(xs.size()) +
                         " components, expected " + std::to_string(spec_.dim));
      }
      x_.resize(xs.size());
      for (size_t i = 0; i < xs.size(); ++i) {
        if (!xs[i].is_number()) return Violation("eval vector holds a non-number");
        x_[i] = xs[i].get<double>();
        if (!std::isfinite(x_[i])) return Violation("eval vector is not finite");
      }
      if (evaluator_.exhausted()) {
        outbox += "{\"exhausted\":true}\n";
      } else {
        const double y = evaluator_.Spend(x_);
        outbox += json{{"y", y}}.dump() + "\n";
      }
    } else if (key == "done") {
      end_ = End::kDone;
    } else if (key == "error") {
      end_ = End::kError;
      if (body.is_object() && body.contains("message") && body["message"].is_string()) {
        error_ = body["message"].get<std::string>();
      } else {
        error_ = body.dump();
      }
      if (error_.empty()) error_ = "candidate reported an error without a message";
      if (body.is_object() && body.contains("phase") && body["phase"].is_string()) {
        phase_ = body["phase"].get<std::string>();
      }
    } else {
      Violation("unknown message type '" + key + "'");
    }
  }

  End end() const { return end_; }
  void set_end(End e) { end_ = e; }
  const std::string& error() const { return error_; }
  const std::optional<std::string>& phase() const { return phase_; }

 private:
  void Violation(const std::string& detail) {
    end_ = End::kProtocol;
    error_ = "protocol: " + detail;
  }

  const ExecutionSpec& spec_;
  BudgetedEvaluator& evaluator_;
  std::vector<double> x_;
  End end_ = End::kNone;
  std::string error_;
  std::optional<std::string> phase_;
};

std::string InitLine(const ExecutionSpec& spec) {
  const json init = {{"init",
                      {{"dim", spec.dim},
                       {"budget", spec.budget},
                       {"bounds", {spec.lower, spec.upper}},
                       {"seed", spec.seed},
                       {"code", spec.code}}}};
  return init.dump() + "\n";
}

std::string DescribeExit(int status) {
  if (WIFSIGNALED(status)) {
    return "shim terminated by signal " + std::to_string(WTERMSIG(status)) + " (" +
           strsignal(WTERMSIG(status)) + ")";
  }
  return "shim exited with status " + std::to_string(WEXITSTATUS(status));
}

}  // namespace

void ExecutionSpec::Validate() const {
  if (timeout.count() <= 0) throw DomainError("execution timeout must be positive");
  if (budget < 1) throw DomainError("execution budget must be >= 1");
  if (dim < 1) throw DomainError("execution dimension must be >= 1");
  if (!(lower < upper)) throw DomainError("execution bounds must satisfy lower < upper");
}

std::string CapErrorText(std::string_view text, size_t cap) {
  if (text.size() <= cap) return std::string(text);
  static constexpr std::string_view kMark = "...";
  size_t start = text.size() - (cap - kMark.size());
  // Never begin inside a multi-byte UTF-8 sequence.
  while (start < text.size() &&
         (static_cast<unsigned char>(text[start]) & 0xC0) == 0x80) {
    ++start;
  }
  return std::string(kMark) + std::string(text.substr(start));
}

SubprocessExecutor::SubprocessExecutor(std::vector<std::string> command)
    : command_(std::move(command)) {
  if (command_.empty()) throw ConfigError("shim command must not be empty");
}

ExecutionOutcome SubprocessExecutor::Execute(const ExecutionSpec& spec) {
  spec.Validate();
  IgnoreSigpipe();
  const auto start = Clock::now();
  const auto deadline = start + spec.timeout;
  BudgetedEvaluator evaluator(
      MakeInstance(FunctionId(spec.fid), spec.iid, spec.dim, spec.master_seed),
      spec.budget);
  ExecutionOutcome out;
  auto finish = [&]() -> ExecutionOutcome {
    out.evaluations = evaluator.used();
    out.trajectory = MakeTrajectory(spec, evaluator.TakeTrace());
    if (out.error) out.error = CapErrorText(*out.error);
    out.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
        Clock::now() - start);
    return std::move(out);
  };

  Pipe in, child_out, child_err;
  MakePipe(in);
  MakePipe(child_out);
  MakePipe(child_err);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in.read.get(), STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, child_out.write.get(), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, child_err.write.get(), STDERR_FILENO);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  sigset_t defaults;
  sigemptyset(&defaults);
  sigaddset(&defaults, SIGPIPE);
  posix_spawnattr_setsigdefault(&attr, &defaults);
  // Own process group, so a timeout also kills anything the candidate forked.
  posix_spawnattr_setpgroup(&attr, 0);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP | POSIX_SPAWN_SETSIGDEF);
  std::vector<char*> argv;
  for (std::string& arg : command_) argv.push_back(arg.data());
  argv.push_back(nullptr);
  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, argv[0], &actions, &attr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) {
    out.error = "cannot start shim '" + command_[0] + "': " + std::strerror(rc);
    return finish();
  }
  in.read.Reset();
  child_out.write.Reset();
  child_err.write.Reset();
  SetNonBlocking(in.write.get());
  SetNonBlocking(child_out.read.get());
  SetNonBlocking(child_err.read.get());

  Session session(spec, evaluator);
  std::string outbox = InitLine(spec);
  std::string inbox;
  std::string stderr_tail;
  bool stderr_open = true;

  // Request/response phase: runs until a final message, EOF, a protocol
  // violation or the deadline.
  while (session.end() == Session::End::kNone) {
    std::vector<pollfd> fds;
    fds.push_back({child_out.read.get(), POLLIN, 0});
    if (stderr_open) fds.push_back({child_err.read.get(), POLLIN, 0});
    const bool want_write = in.write.valid() && !outbox.empty();
    if (want_write) fds.push_back({in.write.get(), POLLOUT, 0});
    const int ready = ::poll(fds.data(), fds.size(), MillisLeft(deadline));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) {
      session.set_end(Session::End::kTimeout);
      break;
    }
    for (const pollfd& p : fds) {
      if (p.revents == 0) continue;
      if (p.fd == in.write.get()) {
        const ssize_t n = ::write(p.fd, outbox.data(), outbox.size());
        if (n > 0) {
          outbox.erase(0, static_cast<size_t>(n));
        } else if (n < 0 && errno != EAGAIN && errno != EINTR) {
          in.write.Reset();  // shim closed its stdin; keep reading to classify
          outbox.clear();
        }
      } else if (p.fd == child_err.read.get()) {
        stderr_open = ReadSome(p.fd, stderr_tail, 2 * kErrorCap);
      } else if (!ReadSome(p.fd, inbox)) {
        if (session.end() == Session::End::kNone) {
          // Process whatever complete lines arrived with the EOF first.
          size_t nl;
          while (session.end() == Session::End::kNone &&
                 (nl = inbox.find('\n')) != std::string::npos) {
            session.HandleLine(std::string_view(inbox).substr(0, nl), outbox);
            inbox.erase(0, nl + 1);
          }
          if (session.end() == Session::End::kNone) session.set_end(Session::End::kEof);
        }
      }
    }
    size_t nl;
    while (session.end() == Session::End::kNone &&
           (nl = inbox.find('\n')) != std::string::npos) {
      session.HandleLine(std::string_view(inbox).substr(0, nl), outbox);
      inbox.erase(0, nl + 1);
    }
    if (session.end() == Session::End::kNone && inbox.size() > kMaxLineBytes) {
      session.HandleLine("<oversized line>", outbox);
    }
  }
  in.write.Reset();

  const Session::End end = session.end();
  const bool kill_now = end == Session::End::kTimeout || end == Session::End::kProtocol;
  const auto grace = kill_now ? Clock::now() : std::min(deadline, Clock::now() + kExitGrace);
  bool exited = false;
  while (!exited) {
    siginfo_t info{};
    if (::waitid(P_PID, static_cast<id_t>(pid), &info, WEXITED | WNOHANG | WNOWAIT) == 0 &&
        info.si_pid == pid) {
      exited = true;
      break;
    }
    if (Clock::now() >= grace) break;
    pollfd p{child_err.read.get(), POLLIN, 0};
    const int wait_ms = std::min(20, std::max(1, MillisLeft(grace)));
    if (stderr_open) {
      if (::poll(&p, 1, wait_ms) > 0) {
        stderr_open = ReadSome(p.fd, stderr_tail, 2 * kErrorCap);
      }
    } else {
      ::poll(nullptr, 0, wait_ms);
    }
  }
  // Kill the whole group: the shim if it overstayed, plus any stragglers.
  ::killpg(pid, SIGKILL);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (stderr_open) ReadSome(child_err.read.get(), stderr_tail, 2 * kErrorCap);

  switch (end) {
    case Session::End::kDone:
      if (evaluator.used() == 0) out.error = "candidate finished without evaluating f";
      break;
    case Session::End::kError:
      out.error = session.error();
      out.error_phase = session.phase();
      break;
    case Session::End::kProtocol:
      out.error = session.error();
      break;
    case Session::End::kTimeout:
      out.error = "timeout";
      break;
    case Session::End::kEof:
    case Session::End::kNone: {
      const bool crashed = !exited || WIFSIGNALED(status) || WEXITSTATUS(status) != 0;
      if (!crashed) {
        out.error = "protocol: shim exited without a final message";
      } else {
        const std::string text = Trim(stderr_tail);
        out.error = text.empty() ? DescribeExit(status) : text;
      }
      break;
    }
  }
  return finish();
}

ExecutionOutcome NativeExecute(std::string_view optimizer_id, const ExecutionSpec& spec,
                               const EradsParams& erads) {
  spec.Validate();
  const auto& ids = NativeOptimizerIds();
  if (std::find(ids.begin(), ids.end(), optimizer_id) == ids.end()) {
    throw DomainError("unknown native optimizer '" + std::string(optimizer_id) + "'");
  }
  const auto start = Clock::now();
  BudgetedEvaluator evaluator(
      MakeInstance(FunctionId(spec.fid), spec.iid, spec.dim, spec.master_seed),
      spec.budget);
  ExecutionOutcome out;
  try {
    RunNative(optimizer_id, evaluator, spec.seed, erads);
  } catch (const BudgetExhausted&) {
    // A clean end of the run.
  } catch (const std::exception& e) {
    out.error = CapErrorText(e.what());
  }
  out.evaluations = evaluator.used();
  out.trajectory = MakeTrajectory(spec, evaluator.TakeTrace());
  if (!out.trajectory && !out.error) out.error = "optimizer made no evaluations";
  out.wall_time =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
  return out;
}

std::optional<std::string> FindDirective(std::string_view code, std::string_view key) {
  size_t pos = 0;
  while (pos <= code.size()) {
    size_t eol = code.find('\n', pos);
    if (eol == std::string_view::npos) eol = code.size();
    std::string line = Trim(code.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line[0] != '#') continue;
    std::string_view rest = std::string_view(line).substr(1);
    rest.remove_prefix(std::min(rest.find_first_not_of(" \t"), rest.size()));
    if (rest.substr(0, key.size()) != key) continue;
    rest.remove_prefix(key.size());
    rest.remove_prefix(std::min(rest.find_first_not_of(" \t"), rest.size()));
    if (rest.empty() || rest[0] != ':') continue;
    return Trim(rest.substr(1));
  }
  return std::nullopt;
}

ExecutionOutcome NativeExecutor::Execute(const ExecutionSpec& spec) {
  spec.Validate();
  ExecutionOutcome out;
  const std::optional<std::string> id = FindDirective(spec.code, "native-optimizer");
  if (!id) {
    out.error = "candidate has no '# native-optimizer: <id>' directive and cannot run "
                "in-process";
    return out;
  }
  const auto& ids = NativeOptimizerIds();
  if (std::find(ids.begin(), ids.end(), *id) == ids.end()) {
    out.error = "unknown native optimizer '" + *id + "'";
    return out;
  }
  EradsParams erads;
  if (const auto preset = FindDirective(spec.code, "erads-preset")) {
    try {
      erads = EradsPreset(*preset);
    } catch (const std::exception& e) {
      out.error = e.what();
      return out;
    }
  }
  return NativeExecute(*id, spec, erads);
}

}  // namespace llamea
