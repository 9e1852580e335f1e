#include <doctest.h>

#include "../support/oracle.h"
#include "ipm/dafny.h"
#include "ipm/proof.h"

using namespace ipm;
using namespace ipm::proof;
using sexpr::parse_term;

namespace {

dafny::ExprContext xyz() {
  dafny::ExprContext ctx;
  for (auto v : {"x", "y", "z"}) ctx.symbols[v] = dafny::Sort::Int;
  return ctx;
}

Tactic tac(TacticKind k, std::string_view text) {
  static const auto ctx = xyz();
  return {k, dafny::parse_expr(text, ctx)};
}

Engine make(std::vector<std::string> hyps, std::string goal, int* calls = nullptr) {
  std::vector<Term> hs;
  for (const auto& h : hyps) hs.push_back(parse_term(h));
  return Engine(testing::bounded_oracle({"x", "y", "z"}, -6, 6, calls), {}, hs, parse_term(goal));
}

// Closed by the initial check.
Engine parity() { return make({"(>= x 0)", "(<= x 4)"}, "(or (= x 0) (= x 1) (= x 2) (= x 3) (= x 4))"); }

// Valid, but the oracle refuses the root query, as an incomplete solver would.
Engine hard() {
  Term goal = parse_term("(>= (* x x) 0)");
  auto inner = testing::bounded_oracle({"x", "y", "z"});
  return Engine([=](std::span<const Term> h, const Term& g) {
    if (h.empty() && g == goal) return solver::Verdict{solver::Outcome::NotProved, solver::Reason::Unknown, {}};
    return inner(h, g);
  }, {}, {}, goal);
}

}  // namespace

TEST_CASE("initial check") {
  CHECK(make({}, "true").tree().complete());
  CHECK(make({"(> x 0)"}, "(>= x 1)").tree().complete());
  auto e = make({}, "(> x 0)");
  CHECK(e.tree().open_count() == 1);
  CHECK(e.tree().focus == 0);
  CHECK(e.initial_verdict().reason == solver::Reason::Sat);
}

TEST_CASE("root auto-discharged reconstructs to an empty proof") {
  CHECK(make({}, "true").reconstruct() == "");
}

TEST_CASE("check leaves the state alone") {
  auto e = make({}, "(> x 0)");
  Tree before = e.tree();
  auto r = e.apply(tac(TacticKind::Check, "x * x >= 0"));
  CHECK(r.verdict.proved());
  r = e.apply(tac(TacticKind::Check, "x > 3"));
  CHECK(r.verdict.reason == solver::Reason::Sat);
  CHECK(e.tree() == before);
  CHECK(e.history_size() == 0);
}

TEST_CASE("case splits into two goals with the condition and its negation") {
  auto e = make({"(> y 0)"}, "(> (+ x y) 0)");
  REQUIRE(e.tree().open_count() == 1);
  auto r = e.apply(tac(TacticKind::Case, "x >= 0"));
  const auto& root = e.tree().node(0);
  REQUIRE(root.children.size() == 2);
  const auto& c1 = e.tree().node(root.children[0]);
  const auto& c2 = e.tree().node(root.children[1]);
  CHECK(c1.hypotheses.back() == parse_term("(>= x (LitInt 0))"));
  CHECK(c2.hypotheses.back() == parse_term("(not (>= x (LitInt 0)))"));
  CHECK(c1.goal == root.goal);
  CHECK(c1.status == Status::AutoDischarged);
  CHECK(c2.is_goal());
  CHECK(r.new_goals == std::vector<int>{2});
  CHECK(r.discharged == std::vector<int>{1});
  CHECK(e.tree().focus == 2);
  CHECK(e.history_size() == 1);
}

TEST_CASE("assert creates a proof obligation and a use obligation") {
  auto h = hard();
  auto r = h.apply(tac(TacticKind::Assert, "x * x == x * x"));
  const auto& root = h.tree().node(0);
  const auto& prove = h.tree().node(root.children[0]);
  const auto& use = h.tree().node(root.children[1]);
  CHECK(prove.hypotheses.empty());
  CHECK(prove.goal == parse_term("(= (Mul x x) (Mul x x))"));
  CHECK(use.hypotheses.size() == 1);
  CHECK(prove.status == Status::AutoDischarged);
  CHECK(use.status == Status::AutoDischarged);
  CHECK(r.complete);
  CHECK(root.status == Status::ClosedByTactic);
  CHECK(h.reconstruct() == "assert ((x * x) == (x * x));\n");
}

TEST_CASE("open-goal accounting and focus after tactics") {
  auto f = make({}, "(> x 10)");
  REQUIRE(f.tree().open_count() == 1);
  auto r = f.apply(tac(TacticKind::Case, "x > 0"));
  CHECK(f.tree().open_count() == 1 - 1 + r.new_goals.size());
  CHECK(f.tree().open_count() == 2);
  CHECK(f.tree().focus == 1);
  r = f.apply(tac(TacticKind::Assume, "x > 10"));
  CHECK(r.new_goals.empty());
  CHECK(f.tree().open_count() == 1);
  CHECK(r.goal_closed);
  CHECK(f.tree().focus == 2);
  CHECK(f.tree().node(1).status == Status::Assumed);
}

TEST_CASE("undo restores snapshots exactly") {
  auto e = parity();
  CHECK_THROWS_WITH(e.undo(), "nothing to undo");
  auto h = make({}, "(> x 10)");
  Tree t0 = h.tree();
  h.apply(tac(TacticKind::Case, "x >= 0"));
  Tree t1 = h.tree();
  h.apply(tac(TacticKind::Assume, "x > 10"));
  h.undo();
  CHECK(h.tree() == t1);
  h.undo();
  CHECK(h.tree() == t0);
  CHECK_THROWS(h.undo());
}

TEST_CASE("node ids are never reused") {
  auto h = hard();
  h.apply(tac(TacticKind::Case, "x >= 0"));
  h.undo();
  h.apply(tac(TacticKind::Case, "x >= 1"));
  CHECK(h.tree().node(0).children == std::vector<int>{3, 4});
}

TEST_CASE("focus") {
  auto h = make({}, "(> x 10)");
  h.apply(tac(TacticKind::Case, "x > 0"));
  REQUIRE(h.tree().open_order == std::vector<int>{1, 2});
  h.focus(2);
  CHECK(h.tree().focus == 2);
  Tree t = h.tree();
  h.focus(2);
  CHECK(h.tree() == t);
  CHECK_THROWS_WITH(h.focus(0), "goal 0 is not open");
  CHECK_THROWS_WITH(h.focus(99), "no goal with id 99");
  h.apply(tac(TacticKind::Assume, "false"));
  CHECK_THROWS(h.focus(2));
  CHECK(h.tree().focus == 1);
}

TEST_CASE("no open goal") {
  auto e = make({}, "true");
  CHECK_THROWS_AS(e.apply(tac(TacticKind::Check, "true")), NoOpenGoal);
  CHECK_THROWS_AS(e.apply(tac(TacticKind::Case, "true")), NoOpenGoal);
}

TEST_CASE("reconstruction") {
  auto a = make({}, "(> x 10)");
  a.apply(tac(TacticKind::Assume, "false"));
  CHECK(a.tree().complete());
  CHECK(a.tree().tainted());
  CHECK(a.reconstruct() == "assume false;\n");

  auto b = make({}, "(> x 10)");
  CHECK_THROWS_WITH(b.reconstruct(), doctest::Contains("1 goal(s) remaining"));
  b.apply(tac(TacticKind::Case, "x > 10"));
  b.apply(tac(TacticKind::Assert, "x > 10"));  // prove child open under x <= 10
  b.apply(tac(TacticKind::Assume, "false"));
  CHECK(b.tree().complete());
  CHECK(b.reconstruct() ==
        "if ((x > 10)) {\n"
        "} else {\n"
        "  assert (x > 10) by {\n"
        "    assume false;\n"
        "  }\n"
        "}\n");
  CHECK_FALSE(make({}, "true").tree().tainted());
}

TEST_CASE("premises of tactic applications") {
  auto h = make({"(> y 0)"}, "(> (+ x y) 20)");
  h.apply(tac(TacticKind::Case, "x > 0"));
  auto p = h.premises(0);
  REQUIRE(p.size() == 2);
  CHECK(p[0] == parse_term("(=> (and (> y 0) (> x (LitInt 0))) (> (+ x y) 20))"));
  CHECK(h.obligation(0) == parse_term("(=> (> y 0) (> (+ x y) 20))"));
  h.apply(tac(TacticKind::Assume, "x > 30"));
  auto q = h.premises(1);
  REQUIRE(q.size() == 2);
  CHECK(q[1] == parse_term("(=> (and (> y 0) (> x (LitInt 0))) (> x (LitInt 30)))"));
}

TEST_CASE("solver failure leaves the state untouched") {
  int calls = 0;
  bool fail = false;
  auto inner = testing::bounded_oracle({"x"});
  Engine e([&](std::span<const Term> h, const Term& g) {
    ++calls;
    if (fail) throw solver::SolverFailure("boom");
    return inner(h, g);
  }, {}, {}, parse_term("(> x 3)"));
  Tree before = e.tree();
  fail = true;
  CHECK_THROWS_AS(e.apply(tac(TacticKind::Case, "x > 0")), solver::SolverFailure);
  CHECK(e.tree() == before);
  CHECK(e.history_size() == 0);
}

TEST_CASE("tactic soundness on random obligations (bounded model)") {
  testing::LinearGen gen(7);
  auto oracle = testing::bounded_oracle({"x", "y", "z"}, -4, 4);
  int applications = 0;
  for (int i = 0; i < 60; ++i) {
    Engine e(oracle, {}, gen.hypotheses(), gen.atom());
    for (int step = 0; step < 4 && !e.tree().complete(); ++step) {
      int focus = *e.tree().focus;
      TacticKind k = std::array{TacticKind::Assert, TacticKind::Case, TacticKind::Assume}[gen.pick(0, 2)];
      e.apply({k, gen.formula()});
      ++applications;
      std::vector<Term> premises = e.premises(focus);
      CHECK(oracle(premises, e.obligation(focus)).proved());
    }
  }
  CHECK(applications > 100);
}
