#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <set>
#include <thread>

#include "ipm/solver.h"

extern char** environ;

namespace ipm::solver {

namespace {

using Clock = std::chrono::steady_clock;

const std::set<std::string> kPinned = {":print-success", ":auto_config", ":smt.auto_config", ":smt.mbqi",
                                       ":smt.random_seed", ":sat.random_seed", ":timeout"};

// Length of the first complete response in `buf`, or 0 when more input is
// needed. Leading whitespace is counted.
std::size_t response_length(const std::string& buf) {
  std::size_t i = 0;
  while (i < buf.size() && std::isspace(static_cast<unsigned char>(buf[i]))) ++i;
  if (i == buf.size()) return 0;
  if (buf[i] != '(') {
    auto nl = buf.find('\n', i);
    return nl == std::string::npos ? 0 : nl + 1;
  }
  int depth = 0;
  for (; i < buf.size(); ++i) {
    char c = buf[i];
    if (c == '"') {
      for (++i; i < buf.size(); ++i) {
        if (buf[i] == '"') {
          if (i + 1 < buf.size() && buf[i + 1] == '"') {
            ++i;
            continue;
          }
          break;
        }
      }
      if (i >= buf.size()) return 0;
    } else if (c == '|') {
      i = buf.find('|', i + 1);
      if (i == std::string::npos) return 0;
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (--depth == 0) return i + 1;
    }
  }
  return 0;
}

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool is_error(const std::string& r) { return r.starts_with("(error"); }

std::string error_text(const std::string& r) {
  auto q = r.find('"');
  auto e = r.rfind('"');
  if (q == std::string::npos || e <= q) return r;
  return r.substr(q + 1, e - q - 1);
}

std::string excerpt(const std::string& s, std::size_t n = 120) {
  return s.size() <= n ? s : s.substr(0, n) + "...";
}

void ignore_sigpipe() {
  static bool done = [] {
    signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

}  // namespace

std::string Verdict::describe() const {
  switch (outcome) {
    case Outcome::Proved:
      return "proved";
    case Outcome::SolverError:
      return "solver error: " + detail;
    case Outcome::NotProved:
      break;
  }
  switch (reason) {
    case Reason::Sat: return "not proved (sat)";
    case Reason::Timeout: return "not proved (timeout)";
    default: return detail.empty() ? "not proved (unknown)" : "not proved (unknown: " + detail + ")";
  }
}

Verdict Verdict::from_answer(std::string_view answer) {
  std::string a = trim(std::string(answer));
  if (a == "unsat") return {Outcome::Proved, Reason::None, {}};
  if (a == "sat") return {Outcome::NotProved, Reason::Sat, {}};
  if (a == "unknown") return {Outcome::NotProved, Reason::Unknown, {}};
  if (a == "timeout") return {Outcome::NotProved, Reason::Timeout, {}};
  if (is_error(a)) return {Outcome::SolverError, Reason::None, error_text(a)};
  return {Outcome::SolverError, Reason::None, "unexpected solver answer: " + excerpt(a)};
}

/* -------------------------------------------------------------------------- */

Session::Session(SolverConfig config) : config_(std::move(config)) {
  if (!config_.trace_path.empty()) {
    trace_.open(config_.trace_path, std::ios::out | std::ios::trunc);
    if (!trace_) throw Error("cannot open trace file " + config_.trace_path);
  }
}

Session::~Session() { shutdown(); }

std::unique_ptr<Session> Session::start(const SolverConfig& config, std::vector<Command> options,
                                        std::vector<Command> prelude) {
  std::unique_ptr<Session> s(new Session(config));
  s->options_ = std::move(options);
  s->prelude_ = std::move(prelude);
  s->boot();
  return s;
}

void Session::spawn() {
  ignore_sigpipe();
  int in[2], out[2];
  if (pipe(in) != 0 || pipe(out) != 0) throw SolverFailure(std::string("pipe: ") + std::strerror(errno));
  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_adddup2(&fa, in[0], 0);
  posix_spawn_file_actions_adddup2(&fa, out[1], 1);
  posix_spawn_file_actions_addopen(&fa, 2, "/dev/null", O_WRONLY, 0);
  for (int fd : {in[0], in[1], out[0], out[1]}) posix_spawn_file_actions_addclose(&fa, fd);

  std::vector<std::string> args{config_.executable};
  args.insert(args.end(), config_.extra_args.begin(), config_.extra_args.end());
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = 0;
  int rc = posix_spawnp(&pid, config_.executable.c_str(), &fa, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&fa);
  close(in[0]);
  close(out[1]);
  if (rc != 0) {
    close(in[1]);
    close(out[0]);
    throw SolverFailure("cannot start solver '" + config_.executable + "': " + std::strerror(rc) +
                        " (set --solver or IPM_SOLVER)");
  }
  fcntl(in[1], F_SETFD, FD_CLOEXEC);
  fcntl(out[0], F_SETFD, FD_CLOEXEC);
  to_solver_ = in[1];
  from_solver_ = out[0];
  buffer_.clear();
  dead_ = false;
  stopping_ = false;
  pid_ = pid;
}

void Session::boot() {
  spawn();
  depth_ = 0;
  current_timeout_ = -1;
  std::string ack = command("(set-option :print-success true)");
  if (ack != "success")
    throw SolverFailure("solver '" + config_.executable + "' did not acknowledge :print-success: " + excerpt(ack));

  std::set<std::string> overridden = kPinned;
  for (const auto& [k, v] : config_.options) overridden.insert(k);
  for (const auto& c : options_) {
    if (c.kind == sexpr::CommandKind::SetOption && overridden.contains(c.name)) continue;
    std::string r = command(print_command(c));
    if (r != "success") {
      rejected_options_.push_back(print_command(c));
      if (trace_) trace_ << "; option not recognized: " << print_command(c) << "\n";
    }
  }
  std::vector<std::string> pinned = {"(set-option :auto_config false)", "(set-option :smt.mbqi false)",
                                     "(set-option :smt.random_seed 0)", "(set-option :sat.random_seed 0)"};
  for (const auto& [k, v] : config_.options) pinned.push_back("(set-option " + k + " " + v + ")");
  for (const auto& p : pinned)
    if (command(p) != "success") rejected_options_.push_back(p);
  set_timeout(config_.timeout_ms);

  for (std::size_t i = 0; i < prelude_.size(); ++i) {
    const auto& c = prelude_[i];
    std::string text = print_command(c);
    std::string r = command(text);
    if (is_error(r))
      throw SolverFailure("solver rejected prelude command " + std::to_string(i + 1) + " (script line " +
                          std::to_string(c.pos().line) + "): " + error_text(r) + "\n  " + excerpt(text));
  }
}

void Session::set_timeout(int ms) {
  if (ms == current_timeout_) return;
  command("(set-option :timeout " + std::to_string(std::max(ms, 0)) + ")");
  current_timeout_ = ms;
}

void Session::send(const std::string& text) {
  if (!alive()) died("writing to solver");
  transcript_.push_back(text);
  if (trace_) trace_ << text << "\n" << std::flush;
  std::string line = text + "\n";
  std::size_t off = 0;
  while (off < line.size()) {
    ssize_t n = write(to_solver_, line.data() + off, line.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      died("writing to solver");
    }
    off += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> Session::read_response(int timeout_ms) {
  auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms);
  for (;;) {
    if (std::size_t n = response_length(buffer_)) {
      std::string r = trim(buffer_.substr(0, n));
      buffer_.erase(0, n);
      if (trace_) trace_ << "; " << r << "\n" << std::flush;
      return r;
    }
    int wait = -1;
    if (timeout_ms >= 0) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
      if (left <= 0) return std::nullopt;
      wait = static_cast<int>(left);
    }
    pollfd p{from_solver_, POLLIN, 0};
    int rc = poll(&p, 1, wait);
    if (rc < 0) {
      if (errno == EINTR) continue;
      died("waiting for solver");
    }
    if (rc == 0) continue;
    char chunk[4096];
    ssize_t n = read(from_solver_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) died("reading from solver");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::string Session::command(const std::string& text) {
  send(text);
  auto r = read_response(60'000);
  if (!r) {
    kill(pid_, SIGKILL);
    died("solver did not answer '" + excerpt(text, 60) + "' within 60 s");
  }
  return *r;
}

void Session::reap() {
  std::lock_guard lock(lifecycle_);
  int pid = pid_;
  if (pid <= 0) return;
  if (to_solver_ >= 0) close(to_solver_);
  if (from_solver_ >= 0) close(from_solver_);
  to_solver_ = from_solver_ = -1;
  int status = 0;
  waitpid(pid, &status, 0);
  pid_ = -1;
  dead_ = true;
}

void Session::died(const std::string& context) {
  bool stopping = stopping_;
  in_flight_ = false;
  if (pid_ > 0) {
    kill(pid_, SIGKILL);
    reap();
  }
  dead_ = true;
  if (stopping) throw SolverFailure("query abandoned: solver session was shut down");
  throw SolverFailure("solver process died (" + context + ")");
}

void Session::enter_block(std::vector<Command> local_decls) {
  if (block_) throw Error("a block is already open");
  block_ = std::move(local_decls);
  command("(push 1)");
  ++depth_;
  for (const auto& c : *block_) {
    std::string r = command(print_command(c));
    if (is_error(r)) throw SolverFailure("solver rejected block command: " + error_text(r));
  }
}

void Session::leave_block() {
  if (!block_) return;
  block_.reset();
  if (!alive()) return;
  command("(pop 1)");
  --depth_;
}

Verdict Session::check_entailment(std::span<const Term> hypotheses, const Term& goal, std::optional<int> timeout_ms) {
  if (!alive()) throw SolverFailure("solver is not running");
  int timeout = timeout_ms.value_or(config_.timeout_ms);
  set_timeout(timeout);

  in_flight_ = true;
  command("(push 1)");
  ++depth_;
  std::optional<std::string> first_error;
  for (const auto& h : hypotheses) {
    std::string r = command("(assert " + sexpr::print_term(h) + ")");
    if (is_error(r) && !first_error) first_error = error_text(r);
  }
  if (!first_error) {
    std::string r = command("(assert (not " + sexpr::print_term(goal) + "))");
    if (is_error(r)) first_error = error_text(r);
  }

  Verdict v{Outcome::SolverError, Reason::None, first_error.value_or("")};
  if (!first_error) {
    send("(check-sat)");
    auto answer = read_response(timeout > 0 ? timeout + config_.watchdog_margin_ms : -1);
    if (!answer) {
      // The solver ignored its own timeout: kill it and start over.
      if (trace_) trace_ << "; watchdog fired after " << timeout + config_.watchdog_margin_ms << " ms\n";
      kill(pid_, SIGKILL);
      in_flight_ = false;
      reap();
      restart();
      return {Outcome::NotProved, Reason::Timeout, "watchdog"};
    }
    v = Verdict::from_answer(*answer);
    if (v.outcome == Outcome::NotProved && v.reason == Reason::Unknown) {
      std::string info = command("(get-info :reason-unknown)");
      if (!is_error(info)) {
        v.detail = error_text(info);
        if (v.detail.find("timeout") != std::string::npos || v.detail.find("canceled") != std::string::npos)
          v.reason = Reason::Timeout;
      }
    }
  }
  command("(pop 1)");
  --depth_;
  in_flight_ = false;
  return v;
}

void Session::restart() {
  if (pid_ > 0) {
    kill(pid_, SIGKILL);
    reap();
  }
  boot();
  if (block_) {
    auto decls = std::move(*block_);
    block_.reset();
    enter_block(std::move(decls));
  }
}

void Session::shutdown() {
  int pid;
  {
    std::lock_guard lock(lifecycle_);
    pid = pid_;
    if (pid <= 0) return;
    if (in_flight_) {
      // The thread running the query notices EOF and cleans up.
      stopping_ = true;
      kill(pid, SIGKILL);
      return;
    }
  }
  stopping_ = true;
  const char bye[] = "(exit)\n";
  [[maybe_unused]] ssize_t ignored = write(to_solver_, bye, sizeof bye - 1);
  close(to_solver_);
  to_solver_ = -1;
  auto deadline = Clock::now() + std::chrono::milliseconds(500);
  int status = 0;
  while (waitpid(pid, &status, WNOHANG) == 0) {
    if (Clock::now() > deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  std::lock_guard lock(lifecycle_);
  if (from_solver_ >= 0) close(from_solver_);
  from_solver_ = -1;
  pid_ = -1;
  dead_ = true;
}

}  // namespace ipm::solver
