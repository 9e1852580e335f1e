#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ipm/session.h"

namespace ipm::app {

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

std::string fill(std::string tpl, const fs::path& in, const fs::path& out) {
  for (auto [key, value] : {std::pair{"{input}", in.string()}, std::pair{"{output}", out.string()}}) {
    std::string q = shell_quote(value);
    for (auto pos = tpl.find(key); pos != std::string::npos; pos = tpl.find(key, pos + q.size()))
      tpl.replace(pos, std::string_view(key).size(), q);
  }
  return tpl;
}

bool on_path(const std::string& exe) {
  if (exe.find('/') != std::string::npos) return fs::exists(exe);
  const char* path = std::getenv("PATH");
  if (!path) return false;
  std::string_view rest(path);
  while (!rest.empty()) {
    auto colon = rest.find(':');
    auto dir = rest.substr(0, colon);
    if (!dir.empty() && fs::exists(fs::path(dir) / exe)) return true;
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  return false;
}

void run_tool(const std::string& tpl, const std::string& flag, const fs::path& in, const fs::path& out) {
  std::istringstream words(tpl);
  std::string exe;
  words >> exe;
  if (exe.empty()) throw InputError(flag + " is empty");
  if (!on_path(exe))
    throw InputError("'" + exe + "' not found; set " + flag + " or pass --from-smt with a pre-generated .smt2");
  std::string cmd = fill(tpl, in, out);
  int rc = std::system(cmd.c_str());
  if (rc != 0) throw InputError("command failed (status " + std::to_string(rc) + "): " + cmd);
  if (!fs::exists(out)) throw InputError("command did not produce " + out.string() + ": " + cmd);
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

Target target_from_smt(std::string_view smt) {
  Target t;
  t.split = vc::segment_script(sexpr::parse_script(smt));
  std::vector<vc::Obligation> obs;
  for (const auto& b : t.split.blocks) {
    try {
      obs.push_back(vc::extract_obligation(b));
    } catch (const Error&) {
      // Blocks unrelated to the interactive target may have other shapes.
      bool relevant = false;
      for (const auto& c : b.commands)
        if (c.term && vc::contains_protect_to_prove(*c.term)) relevant = true;
      if (relevant) throw;
    }
  }
  auto targets = vc::find_ipm_targets(obs);
  if (targets.empty())
    throw InputError("no IPM targets: no proof obligation carries an {:ipm} annotation");
  t.target_count = targets.size();
  if (targets.size() > 1)
    t.notes.push_back(std::to_string(targets.size()) + " IPM targets found; working on the first one");
  t.obligation = std::move(targets.front());

  for (const auto& h : t.obligation.hypotheses) bt::collect_names(h, t.names);
  bt::collect_names(t.obligation.goal, t.names);

  auto note_decl = [&](const sexpr::Command& c) {
    if (c.kind != sexpr::CommandKind::DeclareFun) return;
    const auto& it = c.raw.items;
    if (it.size() != 4 || !it[2].is_list || !it[2].items.empty()) return;
    if (it[3].is_symbol("Int")) t.symbols[c.name] = dafny::Sort::Int;
    if (it[3].is_symbol("Bool")) t.symbols[c.name] = dafny::Sort::Bool;
  };
  for (const auto& c : t.split.prelude) note_decl(c);
  for (const auto& c : t.obligation.local_decls) note_decl(c);
  return t;
}

Target load_target(const fs::path& input, const PipelineOptions& opts) {
  if (!fs::exists(input)) throw InputError("no such file: " + input.string());
  auto ext = input.extension().string();
  if (ext == ".smt2") return target_from_smt(read_file(input));
  if (ext != ".dfy") throw InputError("expected a .dfy or .smt2 file, got " + input.string());

  dafny::SourceUnit unit;
  try {
    unit = dafny::parse_program(read_file(input));
  } catch (const Error& e) {
    throw InputError(input.string() + ": " + e.what());
  }
  auto inst = dafny::instrument(unit);
  if (inst.targets == 0) throw InputError("no IPM targets: add {:ipm} to an assert or ensures clause");

  fs::path stem = input.parent_path() / input.stem();
  fs::path instrumented = opts.emit_instrumented.empty() ? fs::path(stem.string() + ".ipm.dfy")
                                                         : fs::path(opts.emit_instrumented);
  {
    std::ofstream out(instrumented, std::ios::binary);
    if (!out) throw InputError("cannot write " + instrumented.string());
    out << inst.text;
  }

  fs::path smt;
  if (opts.from_smt) {
    smt = stem.string() + ".smt2";
    if (!fs::exists(smt))
      throw InputError("--from-smt expects the SMT-LIB script for " + input.string() + " at " + smt.string());
  } else {
    fs::path bpl = stem.string() + ".ipm.bpl";
    smt = stem.string() + ".ipm.smt2";
    run_tool(opts.dafny_cmd, "--dafny-cmd", instrumented, bpl);
    run_tool(opts.boogie_cmd, "--boogie-cmd", bpl, smt);
  }
  Target t = target_from_smt(read_file(smt));
  if (inst.targets != t.target_count)
    t.notes.push_back("the source has " + std::to_string(inst.targets) + " {:ipm} annotation(s) but the script has " +
                      std::to_string(t.target_count) + " target(s)");
  return t;
}

/* -------------------------------------------------------------------------- */

const char* const kHelpText =
    "commands:\n"
    "  check <expr>    ask the solver whether <expr> follows from the hypotheses\n"
    "  assert <expr>   prove <expr> first, then use it as a hypothesis\n"
    "  case <expr>     split the goal on whether <expr> holds\n"
    "  assume <expr>   add <expr> as a hypothesis without proof (unsound)\n"
    "  undo            revert the last assert, case or assume\n"
    "  focus <n>       switch to open goal <n>\n"
    "  :help           show this list\n"
    "  :quit           leave, abandoning open goals\n";

UserCommand parse_command(std::string_view line) {
  std::string text = trim(line);
  while (!text.empty() && text.back() == ';') text = trim(text.substr(0, text.size() - 1));
  UserCommand c;
  if (text.empty()) return c;
  auto sp = text.find_first_of(" \t");
  std::string word = text.substr(0, sp);
  std::string rest = sp == std::string::npos ? "" : trim(text.substr(sp));
  std::string bare = word.starts_with(':') ? word.substr(1) : word;

  auto no_args = [&](UserCommand::Kind k) {
    if (!rest.empty()) throw Error("'" + word + "' takes no argument");
    c.kind = k;
    return c;
  };
  if (bare == "help") return no_args(UserCommand::Kind::Help);
  if (bare == "quit") return no_args(UserCommand::Kind::Quit);
  if (bare == "undo") return no_args(UserCommand::Kind::Undo);
  if (bare == "focus") {
    int n = -1;
    auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
    if (rest.empty() || ec != std::errc() || p != rest.data() + rest.size() || n < 0)
      throw Error("usage: focus <goal number>");
    c.kind = UserCommand::Kind::Focus;
    c.goal = n;
    return c;
  }
  if (auto k = proof::parse_keyword(word)) {
    if (rest.empty()) throw Error("'" + word + "' needs an expression");
    c.kind = UserCommand::Kind::Tactic;
    c.tactic = *k;
    c.argument = rest;
    return c;
  }
  throw Error("unknown command '" + word + "'; type :help for the list of commands");
}

/* -------------------------------------------------------------------------- */

ProofSession::ProofSession(const Target& target, const solver::SolverConfig& config) {
  solver_ = solver::Session::start(config, target.split.options, target.split.prelude);
  solver_->enter_block(target.obligation.local_decls);
  std::vector<sexpr::Term> hyps;
  for (const auto& h : target.obligation.hypotheses) hyps.push_back(bt::strip_protections(h));
  auto* s = solver_.get();
  engine_ = std::make_unique<proof::Engine>(
      [s](std::span<const sexpr::Term> h, const sexpr::Term& g) { return s->check_entailment(h, g); },
      target.names, std::move(hyps), bt::strip_protections(target.obligation.goal));
  ctx_.symbols = target.symbols;
  ctx_.names = &engine_->names();
}

ProofSession::~ProofSession() = default;

proof::Tactic ProofSession::tactic(proof::TacticKind kind, std::string_view text) const {
  return {kind, dafny::parse_expr(text, ctx_)};
}

}  // namespace ipm::app
