#pragma once

// A long-lived SMT solver process driven over SMT-LIB text on pipes.

#include <atomic>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ipm/sexpr.h"

namespace ipm::solver {

using sexpr::Command;
using sexpr::Term;

struct SolverConfig {
  std::string executable = "z3";
  std::vector<std::string> extra_args = {"-in"};
  int timeout_ms = 1000;
  // Extra (key, value) options, e.g. {":smt.arith.solver", "2"}; they win
  // over options found in the script.
  std::vector<std::pair<std::string, std::string>> options;
  std::string trace_path;
  // Grace period on top of the solver's own timeout before the watchdog
  // kills the process.
  int watchdog_margin_ms = 2000;
};

/// Thrown when the solver process cannot be started, dies, or rejects the
/// prelude.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

enum class Outcome { Proved, NotProved, SolverError };
enum class Reason { None, Sat, Unknown, Timeout };

struct Verdict {
  Outcome outcome = Outcome::NotProved;
  Reason reason = Reason::None;
  std::string detail;  // solver error text or reason-unknown

  bool proved() const { return outcome == Outcome::Proved; }
  std::string describe() const;

  static Verdict from_answer(std::string_view answer);
};

class Session {
 public:
  /// Spawns the solver, replays `options` (minus overridden keys), pins the
  /// configuration and asserts the prelude once.
  static std::unique_ptr<Session> start(const SolverConfig& config, std::vector<Command> options,
                                        std::vector<Command> prelude);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  /// Pushes a frame holding the declarations local to one VC block.
  void enter_block(std::vector<Command> local_decls);
  void leave_block();

  Verdict check_entailment(std::span<const Term> hypotheses, const Term& goal,
                           std::optional<int> timeout_ms = std::nullopt);

  /// Terminates the process. Safe to call twice, and from another thread
  /// while a query is in flight (the query then fails).
  void shutdown();
  /// Restarts a dead process and restores the prelude and open block.
  void restart();

  bool alive() const { return pid_ > 0 && !dead_; }
  std::size_t depth() const { return depth_; }
  int pid() const { return pid_; }
  const std::vector<std::string>& transcript() const { return transcript_; }
  const std::vector<std::string>& rejected_options() const { return rejected_options_; }

 private:
  explicit Session(SolverConfig config);

  SolverConfig config_;
  std::vector<Command> options_;
  std::vector<Command> prelude_;
  std::optional<std::vector<Command>> block_;
  int current_timeout_ = -1;

  std::atomic<int> pid_{-1};
  int to_solver_ = -1;
  int from_solver_ = -1;
  std::string buffer_;
  std::atomic<bool> dead_{false};
  std::atomic<bool> in_flight_{false};
  std::atomic<bool> stopping_{false};
  std::mutex lifecycle_;
  std::size_t depth_ = 0;
  std::vector<std::string> transcript_;
  std::vector<std::string> rejected_options_;
  std::ofstream trace_;

  void spawn();
  void boot();
  void reap();
  void send(const std::string& command);
  // One complete response; empty optional on timeout. Throws on EOF.
  std::optional<std::string> read_response(int timeout_ms);
  std::string command(const std::string& text);
  void set_timeout(int ms);
  [[noreturn]] void died(const std::string& context);
};

}  // namespace ipm::solver
