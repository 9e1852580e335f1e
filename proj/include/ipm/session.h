#pragma once

// Pipeline from an input file to a live proof session, plus the command
// language shared by the REPL and the JSON server.

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "ipm/backtranslate.h"
#include "ipm/dafny.h"
#include "ipm/proof.h"
#include "ipm/solver.h"
#include "ipm/vc.h"

namespace ipm::app {

namespace fs = std::filesystem;

/// Raised for bad input files, missing tools and similar setup problems.
class InputError : public Error {
 public:
  using Error::Error;
};

struct PipelineOptions {
  bool from_smt = false;
  // `{input}` and `{output}` are replaced by shell-quoted paths.
  std::string dafny_cmd = "dafny /compile:0 /noVerify /print:{output} {input}";
  std::string boogie_cmd = "boogie /proverLog:{output} /timeLimit:1 {input}";
  std::string emit_instrumented;  // default: <input>.ipm.dfy
};

struct Target {
  vc::ScriptSplit split;
  vc::Obligation obligation{{}, sexpr::Term::boolean(true), {}, nullptr, false};
  std::size_t target_count = 0;
  bt::NameMap names;
  std::map<std::string, dafny::Sort> symbols;
  std::vector<std::string> notes;  // warnings for the user
};

/// Runs the pipeline up to the first IPM target of the input.
Target load_target(const fs::path& input, const PipelineOptions& opts);
/// Same, starting from SMT-LIB text.
Target target_from_smt(std::string_view smt);

struct UserCommand {
  enum class Kind { Empty, Tactic, Undo, Focus, Help, Quit };
  Kind kind = Kind::Empty;
  proof::TacticKind tactic = proof::TacticKind::Check;
  std::string argument;
  int goal = -1;
};

/// Parses one input line. Throws Error on malformed commands.
UserCommand parse_command(std::string_view line);

extern const char* const kHelpText;

/// A solver process plus the proof engine working on one target.
class ProofSession {
 public:
  ProofSession(const Target& target, const solver::SolverConfig& config);
  ~ProofSession();

  proof::Engine& engine() { return *engine_; }
  const proof::Engine& engine() const { return *engine_; }
  solver::Session& solver() { return *solver_; }

  proof::Tactic tactic(proof::TacticKind kind, std::string_view text) const;

 private:
  std::unique_ptr<solver::Session> solver_;
  std::unique_ptr<proof::Engine> engine_;
  dafny::ExprContext ctx_;
};

}  // namespace ipm::app
