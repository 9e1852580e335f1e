#include <doctest.h>

#include "ipm/backtranslate.h"
#include "ipm/vc.h"
#include "../support/fixtures.h"

using namespace ipm;
using namespace ipm::sexpr;
using namespace ipm::bt;

namespace {

vc::Obligation first_obligation(const std::string& name) {
  auto split = vc::segment_script(parse_script(testing::read_fixture(name)));
  return vc::extract_obligation(split.blocks.at(0));
}

NameMap names_of(const vc::Obligation& ob) {
  NameMap names;
  for (const auto& h : ob.hypotheses) collect_names(h, names);
  collect_names(ob.goal, names);
  return names;
}

Term char_chain(const std::vector<int>& codes) {
  Term acc = Term::quoted("Seq#Empty");
  for (int c : codes)
    acc = Term::app(Term::quoted("Seq#Build"),
                    {acc, Term::app("$Box_23439", {Term::app(Term::quoted("char#FromInt"), {Term::integer(c)})})});
  return acc;
}

std::string show(const Term& t, const NameMap& names = {}) { return display_formula(t, names).text; }

}  // namespace

TEST_CASE("string literal decoding") {
  CHECK(decode_string_literal(char_chain({120})) == "x");
  CHECK(decode_string_literal(Term::quoted("Seq#Empty")).empty());
  std::string label = "x + y > 0";
  std::vector<int> codes(label.begin(), label.end());
  CHECK(codes == std::vector<int>{120, 32, 43, 32, 121, 32, 62, 32, 48});
  CHECK(decode_string_literal(Term::app("Lit_25231", {char_chain(codes)})) == label);
  CHECK_THROWS_AS(decode_string_literal(Term::app(Term::quoted("Seq#Build"),
                                                  {Term::quoted("Seq#Empty"),
                                                   Term::app(Term::quoted("char#FromInt"), {Term::symbol("c")})})),
                  Error);
  CHECK_THROWS_AS(decode_string_literal(Term::symbol("oops")), Error);
}

TEST_CASE("name map from the triangle goal") {
  auto ob = first_obligation("triangle_sum_even.smt2");
  NameMap names = names_of(ob);
  REQUIRE(names.entries().size() == 1);
  CHECK(names.entries()[0] == NameEntry{"x", "x#0@@1", true});
  CHECK(names_of(first_obligation("triangle_sum_even_stock.smt2")).empty());
}

TEST_CASE("shadowed names keep one in-scope entry") {
  NameMap names = names_of(first_obligation("example_shadowing.smt2"));
  auto xs = names.smt_names("x");
  CHECK(xs.size() == 2);
  CHECK(*names.smt_name("x") == "x#1@@1");
  CHECK(*names.smt_name("y") == "y#0@@1");
  int in_scope = 0;
  for (const auto& e : names.entries()) in_scope += e.dafny_name == "x" && e.in_scope;
  CHECK(in_scope == 1);
  CHECK(names.display_name("x#1@@1") == "x");
  CHECK(names.display_name("x#0@@1") == "x#0@@1");
  CHECK(names.display_name("$Heap") == "$Heap");
}

TEST_CASE("name map conflicts") {
  NameMap names;
  names.add("x", "x#0", false);
  CHECK_THROWS_AS(names.add("y", "x#0", false), Error);
  names.add("x", "x#1", true);
  CHECK_THROWS_AS(names.add("x", "x#2", true), Error);
  names.add("x", "x#0", false);  // duplicate collapses
  CHECK(names.entries().size() == 2);
}

TEST_CASE("stripping") {
  Term t = parse_term("($Unbox_995 (_module.__default.__protect TInt reveal ($Box_577 |x#0@@1|) \"x-chain\"))");
  CHECK(print_term(strip_protections(t)) == "|x#0@@1|");
  Term clean = parse_term("(= (Mod a 2) 0)");
  CHECK(strip_protections(clean).same_node(clean));
  Term scoped = parse_term("(and (_module.__default.__protectScope TInt r ($Box_577 a) \"a\") (> a 0))");
  CHECK(print_term(strip_protections(scoped)) == "(> a 0)");
  CHECK_THROWS_AS(strip_protections(parse_term("(_module.__default.__protectToProve p)")), Error);
}

TEST_CASE("instrumented goal strips to the stock goal") {
  auto inst = first_obligation("triangle_sum_even.smt2");
  auto stock = first_obligation("triangle_sum_even_stock.smt2");
  Term stripped = strip_protections(inst.goal);
  CHECK(stripped == stock.goal);
  CHECK(strip_protections(stripped) == stripped);
  REQUIRE(inst.hypotheses.size() == stock.hypotheses.size());
  for (std::size_t i = 0; i < inst.hypotheses.size(); ++i)
    CHECK(strip_protections(inst.hypotheses[i]) == stock.hypotheses[i]);
}

TEST_CASE("display of the triangle obligation") {
  auto ob = first_obligation("triangle_sum_even.smt2");
  NameMap names = names_of(ob);
  std::vector<std::string> before;
  for (const auto& h : ob.hypotheses) before.push_back(print_term(h));
  auto shown = display_obligation(ob.hypotheses, ob.goal, names);
  CHECK(shown.goal.text == "(((x * (x + 1)) % 2) == 0)");
  CHECK(shown.hypotheses.empty());
  // display never touches the solver-facing terms
  for (std::size_t i = 0; i < ob.hypotheses.size(); ++i) CHECK(print_term(ob.hypotheses[i]) == before[i]);
}

TEST_CASE("display rewrite rules") {
  CHECK(show(parse_term("(= (Mod (Mul |x#0@@1| (+ |x#0@@1| 1)) (LitInt 2)) (LitInt 0))")) ==
        "(((x#0@@1 * (x#0@@1 + 1)) % 2) == 0)");
  auto lit = display_rewrite(parse_term("(LitInt 2)"), {});
  REQUIRE(lit);
  const auto& e = std::get<ExprPtr>(*lit);
  CHECK(e->kind == Expr::Kind::IntConst);
  CHECK(e->value == 2);
  CHECK(show(parse_term("(=> a (=> b c))")) == "(a ==> (b ==> c))");
  CHECK(show(parse_term("(not (= a b))")) == "(a != b)");
  CHECK(show(parse_term("(ite (Lit true) (Div a 2) (- a))")) == "(if true then (a / 2) else (-a))");
  CHECK(show(parse_term("(<= (LitInt 0) (- 3))")) == "(0 <= (-3))");
}

TEST_CASE("bookkeeping hypotheses are suppressed") {
  for (const char* text : {"($IsGoodHeap $Heap)", "($IsHeapAnchor $Heap)", "(= (ControlFlow 0 2) (- 0 1))",
                           "(= $_ModifiesFrame@0 (|lambda#0| null $Heap alloc false))"}) {
    auto d = display_rewrite(parse_term(text), {});
    REQUIRE(d);
    CHECK(std::holds_alternative<Suppressed>(*d));
    CHECK(display_formula(parse_term(text), {}).suppressed);
  }
}

TEST_CASE("terms outside the fragment render raw") {
  Term q = parse_term("(forall ((i Int)) (> (f i) 0))");
  CHECK_FALSE(display_rewrite(q, {}));
  auto f = display_formula(q, {});
  CHECK(f.is_raw());
  CHECK(f.text == print_term(q));
  CHECK(display_formula(parse_term("(> (f x) 0)"), {}).is_raw());
}

TEST_CASE("dead definitions") {
  auto hyp = [](const char* text, std::size_t i) { return display_formula(parse_term(text), {}, i); };
  auto goal = hyp("(> x 0)", 0);
  CHECK(eliminate_dead_definitions({hyp("(= h oldHeap)", 0)}, goal).empty());
  CHECK(eliminate_dead_definitions({}, goal).empty());
  auto chain = eliminate_dead_definitions({hyp("(= a 1)", 0), hyp("(= b a)", 1)}, goal);
  CHECK(chain.empty());
  auto kept = eliminate_dead_definitions({hyp("(= x 1)", 0), hyp("(= b 2)", 1)}, goal);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].text == "(x == 1)");
}

TEST_CASE("shadowed display prefers the in-scope name") {
  auto ob = first_obligation("example_shadowing.smt2");
  NameMap names = names_of(ob);
  auto shown = display_obligation(ob.hypotheses, ob.goal, names);
  CHECK(shown.goal.text == "((x + y) > 0)");
  std::vector<std::string> hyps;
  for (const auto& h : shown.hypotheses) hyps.push_back(h.text);
  CHECK(hyps == std::vector<std::string>{"(0 <= x#0@@1)", "(0 <= y)", "((x#0@@1 + y) > 0)", "(x == 1)"});
}
