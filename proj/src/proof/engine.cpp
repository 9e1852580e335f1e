#include <algorithm>

#include "ipm/proof.h"

namespace ipm::proof {

std::string_view keyword(TacticKind k) {
  switch (k) {
    case TacticKind::Check: return "check";
    case TacticKind::Assert: return "assert";
    case TacticKind::Case: return "case";
    case TacticKind::Assume: return "assume";
  }
  return "?";
}

std::optional<TacticKind> parse_keyword(std::string_view w) {
  for (auto k : {TacticKind::Check, TacticKind::Assert, TacticKind::Case, TacticKind::Assume})
    if (keyword(k) == w) return k;
  return std::nullopt;
}

const Node& Tree::node(int id) const {
  auto it = nodes.find(id);
  if (it == nodes.end()) throw Error("no goal with id " + std::to_string(id));
  return it->second;
}

bool Tree::tainted() const {
  return std::any_of(nodes.begin(), nodes.end(), [](const auto& kv) {
    return kv.second.tactic && kv.second.tactic->kind == TacticKind::Assume;
  });
}

Engine::Engine(Oracle oracle, bt::NameMap names, std::vector<Term> hypotheses, Term goal)
    : oracle_(std::move(oracle)), names_(std::move(names)) {
  tree_.root = add_node(-1, std::move(hypotheses), std::move(goal));
  const Node& root = tree_.node(tree_.root);
  initial_ = oracle_(root.hypotheses, root.goal);
  if (initial_.proved()) tree_.nodes[tree_.root].status = Status::AutoDischarged;
  refresh_open_order();
  if (!tree_.open_order.empty()) tree_.focus = tree_.open_order.front();
}

int Engine::add_node(int parent, std::vector<Term> hypotheses, Term goal) {
  int id = next_id_++;
  Node n;
  n.id = id;
  n.parent = parent;
  n.hypotheses = std::move(hypotheses);
  n.goal = std::move(goal);
  tree_.nodes.emplace(id, std::move(n));
  if (parent >= 0) tree_.nodes[parent].children.push_back(id);
  return id;
}

bool Engine::discharge(int id, Report& r) {
  const Node& n = tree_.node(id);
  Verdict v = oracle_(n.hypotheses, n.goal);
  if (v.proved()) {
    tree_.nodes[id].status = Status::AutoDischarged;
    r.discharged.push_back(id);
    return true;
  }
  if (v.outcome == solver::Outcome::SolverError) r.solver_errors.push_back(v.detail);
  r.new_goals.push_back(id);
  return false;
}

void Engine::close_upward(int id) {
  while (id >= 0) {
    Node& n = tree_.nodes[id];
    if (!n.tactic || n.status != Status::Open) return;
    for (int c : n.children)
      if (tree_.node(c).status == Status::Open) return;
    n.status = n.tactic->kind == TacticKind::Assume ? Status::Assumed : Status::ClosedByTactic;
    id = n.parent;
  }
}

void Engine::refresh_open_order() {
  tree_.open_order.clear();
  for (const auto& [id, n] : tree_.nodes)
    if (n.is_goal()) tree_.open_order.push_back(id);
}

Report Engine::apply(const Tactic& t) {
  if (!tree_.focus) throw NoOpenGoal("there is no open goal");
  const int id = *tree_.focus;
  Report r;
  r.kind = t.kind;
  if (t.kind == TacticKind::Check) {
    r.verdict = oracle_(tree_.node(id).hypotheses, t.formula);
    return r;
  }

  Tree saved = tree_;
  try {
    tree_.nodes[id].tactic = t;
    const std::vector<Term> hyps = tree_.node(id).hypotheses;
    const Term goal = tree_.node(id).goal;
    auto with = [&](Term extra) {
      auto h = hyps;
      h.push_back(std::move(extra));
      return h;
    };
    std::vector<int> kids;
    switch (t.kind) {
      case TacticKind::Assert:
        kids.push_back(add_node(id, hyps, t.formula));
        kids.push_back(add_node(id, with(t.formula), goal));
        break;
      case TacticKind::Case:
        kids.push_back(add_node(id, with(t.formula), goal));
        kids.push_back(add_node(id, with(Term::app("not", {t.formula})), goal));
        break;
      case TacticKind::Assume:
        kids.push_back(add_node(id, with(t.formula), goal));
        break;
      case TacticKind::Check:
        break;
    }
    for (int k : kids) discharge(k, r);
    close_upward(id);
    refresh_open_order();
    r.goal_closed = tree_.node(id).status != Status::Open;
    tree_.focus.reset();
    for (int k : kids)
      if (tree_.node(k).is_goal()) {
        tree_.focus = k;
        break;
      }
    if (!tree_.focus && !tree_.open_order.empty()) tree_.focus = tree_.open_order.front();
  } catch (...) {
    tree_ = std::move(saved);
    throw;
  }
  history_.push_back(std::move(saved));
  r.complete = tree_.complete();
  return r;
}

void Engine::undo() {
  if (history_.empty()) throw Error("nothing to undo");
  tree_ = std::move(history_.back());
  history_.pop_back();
}

void Engine::focus(int id) {
  auto it = tree_.nodes.find(id);
  if (it == tree_.nodes.end()) throw Error("no goal with id " + std::to_string(id));
  if (!it->second.is_goal()) throw Error("goal " + std::to_string(id) + " is not open");
  tree_.focus = id;
}

bt::DisplayedObligation Engine::display(int id) const {
  auto it = display_cache_.find(id);
  if (it != display_cache_.end()) return it->second;
  const Node& n = tree_.node(id);
  auto d = bt::display_obligation(n.hypotheses, n.goal, names_);
  display_cache_.emplace(id, d);
  return d;
}

std::string Engine::render(const Term& t) const { return bt::display_formula(t, names_).text; }

Term Engine::obligation(int id) const {
  const Node& n = tree_.node(id);
  if (n.hypotheses.empty()) return n.goal;
  Term h = n.hypotheses.size() == 1 ? n.hypotheses[0] : Term::app("and", n.hypotheses);
  return Term::app("=>", {h, n.goal});
}

std::vector<Term> Engine::premises(int id) const {
  const Node& n = tree_.node(id);
  std::vector<Term> out;
  for (int c : n.children) out.push_back(obligation(c));
  if (n.tactic && n.tactic->kind == TacticKind::Assume) {
    Term fact = n.tactic->formula;
    if (!n.hypotheses.empty())
      fact = Term::app("=>", {n.hypotheses.size() == 1 ? n.hypotheses[0] : Term::app("and", n.hypotheses), fact});
    out.push_back(fact);
  }
  return out;
}

std::string Engine::reconstruct() const {
  if (!tree_.complete())
    throw Error("the proof is not finished: " + std::to_string(tree_.open_count()) + " goal(s) remaining");
  std::string out;
  emit(tree_.root, 0, out);
  return out;
}

void Engine::emit(int id, int indent, std::string& out) const {
  const Node& n = tree_.node(id);
  if (!n.tactic) return;
  const std::string pad(indent, ' ');
  const std::string f = render(n.tactic->formula);
  const auto& kids = n.children;
  switch (n.tactic->kind) {
    case TacticKind::Assert:
      if (tree_.node(kids[0]).status == Status::AutoDischarged) {
        out += pad + "assert " + f + ";\n";
      } else {
        out += pad + "assert " + f + " by {\n";
        emit(kids[0], indent + 2, out);
        out += pad + "}\n";
      }
      emit(kids[1], indent, out);
      break;
    case TacticKind::Case:
      out += pad + "if (" + f + ") {\n";
      emit(kids[0], indent + 2, out);
      out += pad + "} else {\n";
      emit(kids[1], indent + 2, out);
      out += pad + "}\n";
      break;
    case TacticKind::Assume:
      out += pad + "assume " + f + ";\n";
      emit(kids[0], indent, out);
      break;
    case TacticKind::Check:
      break;
  }
}

}  // namespace ipm::proof
