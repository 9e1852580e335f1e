#pragma once

// Goal tree, tactics, undo/focus and proof reconstruction.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ipm/backtranslate.h"
#include "ipm/solver.h"

namespace ipm::proof {

using sexpr::Term;
using solver::Verdict;

enum class Status { Open, AutoDischarged, ClosedByTactic, Assumed };
enum class TacticKind { Check, Assert, Case, Assume };

std::string_view keyword(TacticKind k);
std::optional<TacticKind> parse_keyword(std::string_view word);

struct Tactic {
  TacticKind kind;
  Term formula;  // boolean, protection-free, over solver names

  friend bool operator==(const Tactic&, const Tactic&) = default;
};

struct Node {
  int id = 0;
  int parent = -1;
  std::vector<Term> hypotheses;
  Term goal = Term::boolean(true);
  Status status = Status::Open;
  std::optional<Tactic> tactic;
  std::vector<int> children;

  // A goal still waiting for a tactic. Nodes with a tactic whose children
  // are not all closed keep status Open but are not goals.
  bool is_goal() const { return status == Status::Open && !tactic; }

  friend bool operator==(const Node&, const Node&) = default;
};

struct Tree {
  std::map<int, Node> nodes;
  int root = 0;
  std::optional<int> focus;
  std::vector<int> open_order;  // open goals in creation order

  const Node& node(int id) const;
  std::size_t open_count() const { return open_order.size(); }
  bool complete() const { return open_order.empty(); }
  bool tainted() const;

  friend bool operator==(const Tree&, const Tree&) = default;
};

/// Answers "do the hypotheses entail the goal".
using Oracle = std::function<Verdict(std::span<const Term>, const Term&)>;

struct Report {
  TacticKind kind = TacticKind::Check;
  Verdict verdict;                 // Check only
  std::vector<int> new_goals;      // children left open
  std::vector<int> discharged;     // children closed by the solver
  std::vector<std::string> solver_errors;
  bool goal_closed = false;        // the node the tactic was applied to closed
  bool complete = false;           // no open goals remain
};

class NoOpenGoal : public Error {
 public:
  using Error::Error;
};

class Engine {
 public:
  /// Builds the root from an obligation and runs the initial check.
  Engine(Oracle oracle, bt::NameMap names, std::vector<Term> hypotheses, Term goal);

  const Tree& tree() const { return tree_; }
  const bt::NameMap& names() const { return names_; }
  std::size_t history_size() const { return history_.size(); }
  const Verdict& initial_verdict() const { return initial_; }

  Report apply(const Tactic& t);
  void undo();
  void focus(int id);

  bt::DisplayedObligation display(int id) const;
  std::string render(const Term& t) const;

  /// Dafny statements proving the root. Throws while goals are open.
  std::string reconstruct() const;

  /// The facts that together must entail the obligation of node `id`: the
  /// children's obligations and, for Assume, the assumed fact itself.
  std::vector<Term> premises(int id) const;
  Term obligation(int id) const;

 private:
  Oracle oracle_;
  bt::NameMap names_;
  Tree tree_;
  std::vector<Tree> history_;
  int next_id_ = 0;
  Verdict initial_;
  mutable std::map<int, bt::DisplayedObligation> display_cache_;

  int add_node(int parent, std::vector<Term> hypotheses, Term goal);
  bool discharge(int id, Report& r);
  void close_upward(int id);
  void refresh_open_order();
  void emit(int id, int indent, std::string& out) const;
};

}  // namespace ipm::proof
