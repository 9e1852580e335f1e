#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <ostream>

#include "ipm/api.h"

namespace ipm::api {

using proof::Status;
using proof::TacticKind;

namespace {

const char* status_name(Status s) {
  switch (s) {
    case Status::Open: return "open";
    case Status::AutoDischarged: return "autoDischarged";
    case Status::ClosedByTactic: return "closedByTactic";
    case Status::Assumed: return "assumed";
  }
  return "?";
}

json verdict_json(const solver::Verdict& v) {
  static const char* outcomes[] = {"proved", "notProved", "solverError"};
  static const char* reasons[] = {"none", "sat", "unknown", "timeout"};
  return {{"outcome", outcomes[static_cast<int>(v.outcome)]},
          {"reason", reasons[static_cast<int>(v.reason)]},
          {"detail", v.detail},
          {"text", v.describe()}};
}

json reply(const json& id, const char* type, json payload) {
  return {{"id", id}, {"type", type}, {"payload", std::move(payload)}};
}

json error_reply(const json& id, const std::string& message) {
  return reply(id, "error", {{"message", message}});
}

const json& field(const json& payload, const char* name, json::value_t type) {
  if (!payload.contains(name)) throw Error(std::string("payload lacks '") + name + "'");
  const json& v = payload.at(name);
  bool ok = v.type() == type || (type == json::value_t::number_integer && v.is_number_integer());
  if (!ok) throw Error(std::string("payload field '") + name + "' has the wrong type");
  return v;
}

}  // namespace

json state_json(const proof::Engine& engine) {
  const auto& tree = engine.tree();
  json goals = json::array();
  for (int id : tree.open_order) {
    auto d = engine.display(id);
    json hyps = json::array();
    for (const auto& h : d.hypotheses) hyps.push_back(h.text);
    goals.push_back({{"id", id}, {"hypotheses", hyps}, {"goal", d.goal.text}});
  }
  json nodes = json::array();
  for (const auto& [id, n] : tree.nodes) {
    json tactic = nullptr;
    if (n.tactic) tactic = std::string(proof::keyword(n.tactic->kind)) + " " + engine.render(n.tactic->formula);
    nodes.push_back({{"id", id},
                     {"parent", n.parent < 0 ? json(nullptr) : json(n.parent)},
                     {"status", status_name(n.status)},
                     {"goal", engine.display(id).goal.text},
                     {"tactic", tactic},
                     {"children", n.children}});
  }
  return {{"goalCount", tree.open_count()},
          {"focus", tree.focus ? json(*tree.focus) : json(nullptr)},
          {"tainted", tree.tainted()},
          {"complete", tree.complete()},
          {"goals", goals},
          {"nodes", nodes}};
}

Handler::Handler(std::unique_ptr<app::ProofSession> session) : session_(std::move(session)) {}

std::vector<json> Handler::handle_line(std::string_view line) {
  json msg;
  try {
    msg = json::parse(line);
  } catch (const json::exception& e) {
    return {error_reply(nullptr, std::string("malformed JSON: ") + e.what())};
  }
  return handle(msg);
}

std::vector<json> Handler::handle(const json& msg) {
  json id = nullptr;
  try {
    if (!msg.is_object()) throw Error("message must be a JSON object");
    if (!msg.contains("id") || !(msg["id"].is_string() || msg["id"].is_number_integer()))
      throw Error("message needs an 'id' (string or integer)");
    id = msg["id"];
    if (!msg.contains("type") || !msg["type"].is_string()) throw Error("message needs a string 'type'");
    json payload = msg.value("payload", json::object());
    if (!payload.is_object()) throw Error("'payload' must be an object");
    const std::string type = msg["type"];
    auto& engine = session_->engine();

    if (type == "getState") return {reply(id, "state", state_json(engine))};
    if (type == "quit") {
      finished_ = true;
      return {reply(id, "state", state_json(engine))};
    }
    if (type == "undo") {
      engine.undo();
      return {tactic_report(id, {{"tactic", "undo"}})};
    }
    if (type == "focus") {
      engine.focus(field(payload, "goal", json::value_t::number_integer).get<int>());
      return {tactic_report(id, {{"tactic", "focus"}, {"goal", *engine.tree().focus}})};
    }
    if (type != "applyTactic") throw Error("unknown message type '" + type + "'");

    TacticKind kind;
    std::string expr;
    if (payload.contains("text")) {
      auto c = app::parse_command(field(payload, "text", json::value_t::string).get<std::string>());
      if (c.kind != app::UserCommand::Kind::Tactic) throw Error("'text' must hold a tactic");
      kind = c.tactic;
      expr = c.argument;
    } else {
      auto word = field(payload, "tactic", json::value_t::string).get<std::string>();
      auto k = proof::parse_keyword(word);
      if (!k) throw Error("unknown tactic '" + word + "'");
      kind = *k;
      expr = field(payload, "expr", json::value_t::string).get<std::string>();
    }
    auto r = engine.apply(session_->tactic(kind, expr));
    json out = {{"tactic", proof::keyword(kind)},
                {"expr", expr},
                {"newGoals", r.new_goals},
                {"discharged", r.discharged},
                {"goalClosed", r.goal_closed},
                {"complete", r.complete},
                {"solverErrors", r.solver_errors}};
    if (kind == TacticKind::Check) out["verdict"] = verdict_json(r.verdict);
    std::vector<json> replies{tactic_report(id, out)};
    if (r.complete && kind != TacticKind::Check)
      replies.push_back({{"id", nullptr},
                         {"type", "proofComplete"},
                         {"payload",
                          {{"inReplyTo", id},
                           {"goal", engine.display(engine.tree().root).goal.text},
                           {"proof", engine.reconstruct()},
                           {"tainted", engine.tree().tainted()}}}});
    return replies;
  } catch (const solver::SolverFailure& e) {
    std::string msg = std::string("solver failure: ") + e.what();
    try {
      session_->solver().restart();
    } catch (const Error& again) {
      finished_ = true;
      msg += std::string("; restart failed: ") + again.what();
    }
    return {error_reply(id, msg)};
  } catch (const Error& e) {
    return {error_reply(id, e.what())};
  }
}

json Handler::tactic_report(const json& id, const json& payload) {
  json p = payload;
  p["state"] = state_json(session_->engine());
  return reply(id, "tacticReport", std::move(p));
}

/* -------------------------------------------------------------------------- */

Server::Server(app::Target target, solver::SolverConfig config, unsigned short port, std::ostream* log)
    : target_(std::move(target)), config_(std::move(config)), log_(log) {
  signal(SIGPIPE, SIG_IGN);
  listen_fd_ = socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw Error(std::string("socket: ") + std::strerror(errno));
  int one = 1;
  setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || listen(listen_fd_, 16) != 0) {
    std::string err = std::strerror(errno);
    close(listen_fd_);
    throw Error("cannot listen on 127.0.0.1:" + std::to_string(port) + ": " + err);
  }
  socklen_t len = sizeof addr;
  getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  acceptor_ = std::thread([this] { accept_loop(); });
}

Server::~Server() {
  stop();
  wait();
}

void Server::stop() {
  if (stopping_.exchange(true)) return;
  shutdown(listen_fd_, SHUT_RDWR);
  std::lock_guard lock(conn_mutex_);
  for (int fd : client_fds_) shutdown(fd, SHUT_RDWR);
}

void Server::wait() {
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> conns;
  {
    std::lock_guard lock(conn_mutex_);
    conns.swap(connections_);
  }
  for (auto& t : conns) t.join();
  if (listen_fd_ >= 0) close(listen_fd_);
  listen_fd_ = -1;
}

void Server::accept_loop() {
  while (!stopping_) {
    pollfd p{listen_fd_, POLLIN, 0};
    if (poll(&p, 1, 200) <= 0) continue;
    int fd = accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    std::lock_guard lock(conn_mutex_);
    if (stopping_) {
      close(fd);
      break;
    }
    client_fds_.push_back(fd);
    connections_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void Server::serve_connection(int fd) {
  auto write_all = [fd](const std::string& s) {
    std::size_t off = 0;
    while (off < s.size()) {
      ssize_t n = ::send(fd, s.data() + off, s.size() - off, MSG_NOSIGNAL);
      if (n <= 0) return false;
      off += static_cast<std::size_t>(n);
    }
    return true;
  };

  std::unique_ptr<Handler> handler;
  try {
    handler = std::make_unique<Handler>(std::make_unique<app::ProofSession>(target_, config_));
    if (log_) *log_ << "client connected\n" << std::flush;
  } catch (const Error& e) {
    write_all(error_reply(nullptr, std::string("cannot start session: ") + e.what()).dump() + "\n");
  }

  std::string buffer;
  char chunk[4096];
  while (handler && !handler->finished()) {
    auto nl = buffer.find('\n');
    if (nl == std::string::npos) {
      ssize_t n = recv(fd, chunk, sizeof chunk, 0);
      if (n <= 0) break;
      buffer.append(chunk, static_cast<std::size_t>(n));
      continue;
    }
    std::string line = buffer.substr(0, nl);
    buffer.erase(0, nl + 1);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string out;
    for (const auto& r : handler->handle_line(line)) out += r.dump() + "\n";
    if (!write_all(out)) break;
  }
  handler.reset();
  {
    std::lock_guard lock(conn_mutex_);
    std::erase(client_fds_, fd);
  }
  close(fd);
}

int serve(const app::Target& target, const solver::SolverConfig& config, unsigned short port, std::ostream& log) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  Server server(target, config, port, &log);
  log << "listening on 127.0.0.1:" << server.port() << "\n" << std::flush;
  int sig = 0;
  sigwait(&set, &sig);
  server.stop();
  server.wait();
  return 0;
}

}  // namespace ipm::api
