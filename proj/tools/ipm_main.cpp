#include <unistd.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "ipm/api.h"
#include "ipm/repl.h"

using namespace ipm;

int main(int argc, char** argv) {
  CLI::App cli{"Interactive proof mode for Dafny proof obligations"};
  std::string input;
  app::PipelineOptions pipeline;
  solver::SolverConfig config;
  std::string script;
  int port = -1;

  cli.add_option("path", input, "Dafny source (.dfy) or SMT-LIB script (.smt2)")->required();
  cli.add_flag("--from-smt", pipeline.from_smt, "use <input>.smt2 instead of running Dafny and Boogie");
  cli.add_option("--solver", config.executable, "solver executable (default: $IPM_SOLVER or z3)");
  cli.add_option("--timeout-ms", config.timeout_ms, "per-query solver timeout")->check(CLI::NonNegativeNumber);
  cli.add_option("--trace-smt", config.trace_path, "write every solver command and response to this file");
  cli.add_option("--emit-instrumented", pipeline.emit_instrumented, "where to write the instrumented source");
  cli.add_option("--dafny-cmd", pipeline.dafny_cmd, "Dafny command template with {input} and {output}");
  cli.add_option("--boogie-cmd", pipeline.boogie_cmd, "Boogie command template with {input} and {output}");
  cli.add_option("--serve", port, "serve the session as newline-delimited JSON on this local port")
      ->check(CLI::Range(0, 65535));
  cli.add_option("--script", script, "read commands from this file instead of standard input");
  CLI11_PARSE(cli, argc, argv);

  if (cli.count("--solver") == 0)
    if (const char* env = std::getenv("IPM_SOLVER"); env && *env) config.executable = env;

  try {
    auto target = app::load_target(input, pipeline);
    for (const auto& n : target.notes) std::cerr << "note: " << n << "\n";

    if (port >= 0) return api::serve(target, config, static_cast<unsigned short>(port), std::cerr);

    app::ProofSession session(target, config);
    for (const auto& r : session.solver().rejected_options())
      std::cerr << "note: solver rejected option " << r << "\n";

    app::ReplOptions opts;
    auto base = config.executable.substr(config.executable.find_last_of('/') + 1);
    opts.solver_label = base.find("z3") != std::string::npos ? "Z3" : base;
    if (!script.empty()) {
      std::ifstream in(script);
      if (!in) {
        std::cerr << "error: cannot read " << script << "\n";
        return app::kInputError;
      }
      opts.echo = true;
      return app::run_repl(session, in, std::cout, opts);
    }
    opts.echo = !isatty(STDIN_FILENO);
    return app::run_repl(session, std::cin, std::cout, opts);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return app::kInputError;
  }
}
