#include "ipm/repl.h"

#include <istream>
#include <ostream>

namespace ipm::app {

using proof::TacticKind;

std::string render_state(const proof::Engine& engine) {
  const auto& tree = engine.tree();
  std::string out = std::to_string(tree.open_count()) + " goal(s) remaining\n";
  if (!tree.focus) return out;
  auto shown = engine.display(*tree.focus);
  out += "current goal:\nhypotheses\n";
  for (const auto& h : shown.hypotheses) out += "   " + h.text + "\n";
  out += "goal\n   " + shown.goal.text + "\n";
  return out;
}

std::string render_completion(const proof::Engine& engine) {
  std::string out = "Congrats, current goal proved.\n";
  out += "Goal: " + engine.display(engine.tree().root).goal.text + "\n";
  out += "Proof:\n" + engine.reconstruct();
  if (engine.tree().tainted()) out += "WARNING: proof uses assume\n";
  return out;
}

namespace {

std::string check_message(const proof::Report& r, const std::string& arg, const std::string& label) {
  using solver::Outcome;
  using solver::Reason;
  switch (r.verdict.outcome) {
    case Outcome::Proved:
      return "Yes, " + label + " can prove " + arg + "\n";
    case Outcome::SolverError:
      return "solver error: " + r.verdict.detail + "\n";
    case Outcome::NotProved:
      break;
  }
  std::string msg = "No, " + label + " cannot prove " + arg + "\n";
  if (r.verdict.reason == Reason::Timeout) msg += "(the solver timed out)\n";
  if (r.verdict.reason == Reason::Unknown && !r.verdict.detail.empty())
    msg += "(solver gave up: " + r.verdict.detail + ")\n";
  return msg;
}

}  // namespace

int run_repl(ProofSession& session, std::istream& in, std::ostream& out, const ReplOptions& opts) {
  auto& engine = session.engine();
  if (engine.tree().complete()) {
    out << "The goal is discharged automatically; no interaction needed.\n" << render_completion(engine);
    return kProved;
  }
  out << render_state(engine);

  std::string line;
  for (;;) {
    out << "> " << std::flush;
    if (!std::getline(in, line)) {
      out << "\nend of input with " << engine.tree().open_count() << " goal(s) remaining\n";
      return kOpenGoals;
    }
    if (opts.echo) out << line << "\n";

    try {
      UserCommand c = parse_command(line);
      switch (c.kind) {
        case UserCommand::Kind::Empty:
          break;
        case UserCommand::Kind::Help:
          out << kHelpText;
          break;
        case UserCommand::Kind::Quit:
          out << "quitting with " << engine.tree().open_count() << " goal(s) remaining\n";
          return kOpenGoals;
        case UserCommand::Kind::Undo:
          engine.undo();
          out << render_state(engine);
          break;
        case UserCommand::Kind::Focus:
          engine.focus(c.goal);
          out << render_state(engine);
          break;
        case UserCommand::Kind::Tactic: {
          auto tactic = session.tactic(c.tactic, c.argument);
          auto r = engine.apply(tactic);
          if (c.tactic == TacticKind::Check) {
            out << check_message(r, c.argument, opts.solver_label);
            break;
          }
          for (const auto& e : r.solver_errors) out << "solver error: " << e << "\n";
          if (r.complete) {
            out << render_completion(engine);
            return kProved;
          }
          if (r.goal_closed) out << "Congrats, current goal proved.\n";
          out << render_state(engine);
          bool first = true;
          for (int id : r.new_goals) {
            if (engine.tree().focus == id) continue;
            if (first) out << "\n";
            first = false;
            out << "goal " << id << " is: " << engine.display(id).goal.text << "\n";
          }
          break;
        }
      }
    } catch (const solver::SolverFailure& e) {
      out << "solver failure: " << e.what() << "\n";
      try {
        session.solver().restart();
        out << "solver restarted\n";
      } catch (const Error& again) {
        out << "cannot restart the solver: " << again.what() << "\n";
        return kInputError;
      }
    } catch (const Error& e) {
      out << "error: " << e.what() << "\n";
    }
  }
}

}  // namespace ipm::app
