#pragma once

// Newline-delimited JSON access to proof sessions. See docs/protocol.md.

#include <atomic>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ipm/session.h"

namespace ipm::api {

using json = nlohmann::json;

json state_json(const proof::Engine& engine);

/// Protocol state machine for one connection; transport independent.
class Handler {
 public:
  explicit Handler(std::unique_ptr<app::ProofSession> session);

  /// Replies to one client message, in order. The first reply carries the
  /// request id; a proofComplete notification may follow it.
  std::vector<json> handle(const json& message);
  std::vector<json> handle_line(std::string_view line);
  bool finished() const { return finished_; }

  app::ProofSession& session() { return *session_; }

 private:
  std::unique_ptr<app::ProofSession> session_;
  bool finished_ = false;

  json tactic_report(const json& id, const json& payload);
};

/// TCP listener on 127.0.0.1; each connection gets its own session and
/// solver process.
class Server {
 public:
  Server(app::Target target, solver::SolverConfig config, unsigned short port, std::ostream* log = nullptr);
  ~Server();

  unsigned short port() const { return port_; }
  void stop();
  void wait();

 private:
  app::Target target_;
  solver::SolverConfig config_;
  std::ostream* log_;
  int listen_fd_ = -1;
  unsigned short port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex conn_mutex_;
  std::vector<std::thread> connections_;
  std::vector<int> client_fds_;

  void accept_loop();
  void serve_connection(int fd);
};

/// Serves until interrupted. Returns a process exit code.
int serve(const app::Target& target, const solver::SolverConfig& config, unsigned short port, std::ostream& log);

}  // namespace ipm::api
