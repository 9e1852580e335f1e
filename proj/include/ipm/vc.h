#pragma once

// Splitting Boogie-emitted SMT-LIB scripts into a shared prelude and
// per-obligation blocks, and peeling each block into hypotheses and a goal.

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "ipm/sexpr.h"

namespace ipm::vc {

using sexpr::Command;
using sexpr::Term;

/// The commands between one matched (push 1)/(pop 1) pair.
struct VcBlock {
  std::vector<Command> commands;
  std::size_t ordinal = 0;  // position among the script's blocks
  std::optional<Command> push;
  std::optional<Command> pop;
};

struct ScriptSplit {
  std::vector<Command> options;  // set-option, set-info, set-logic
  std::vector<Command> prelude;  // everything else outside blocks
  std::vector<VcBlock> blocks;

  /// Original command sequence, blocks re-wrapped in push/pop.
  std::vector<Command> reassemble() const;
};

struct Obligation {
  std::vector<Term> hypotheses;
  Term goal;
  // Declarations and non-goal assertions that live inside the block.
  std::vector<Command> local_decls;
  std::shared_ptr<const VcBlock> source;
  bool is_ipm_target = false;
};

ScriptSplit segment_script(const std::vector<Command>& commands);

struct ExtractOptions {
  std::size_t inline_budget = 1'000'000;
};

Obligation extract_obligation(const VcBlock& block, const ExtractOptions& opts = {});

/// Replaces every let-bound name by its value. Throws when the inlined tree
/// would exceed `budget` nodes.
Term inline_lets(const Term& t, std::size_t budget = 1'000'000);

/// Peels top-level implications of `body` into antecedents, flattening
/// top-level conjunctions; returns the final consequent.
Term peel_implications(const Term& body, std::vector<Term>& hypotheses);

/// Marks and returns the obligations whose goal contains a call to
/// `__protectToProve`, in input order.
std::vector<Obligation> find_ipm_targets(std::vector<Obligation>& obligations);

bool contains_protect_to_prove(const Term& t);

}  // namespace ipm::vc
