#pragma once

#include <iosfwd>
#include <string>

#include "ipm/session.h"

namespace ipm::app {

/// The goal count and the focused goal, as printed before each prompt.
std::string render_state(const proof::Engine& engine);

/// Banner, root goal and reconstructed proof of a finished session.
std::string render_completion(const proof::Engine& engine);

struct ReplOptions {
  bool echo = false;  // repeat each input line after the prompt
  std::string solver_label = "Z3";
};

enum ExitCode { kProved = 0, kOpenGoals = 1, kInputError = 2 };

int run_repl(ProofSession& session, std::istream& in, std::ostream& out, const ReplOptions& opts = {});

}  // namespace ipm::app
