#include <doctest.h>

#include <functional>
#include <map>
#include <random>
#include <set>

#include "ipm/vc.h"
#include "../support/fixtures.h"

using namespace ipm;
using namespace ipm::sexpr;
using namespace ipm::vc;

namespace {

ScriptSplit load(const std::string& name) { return segment_script(parse_script(testing::read_fixture(name))); }

bool mentions(const Command& c, std::string_view needle) { return print_command(c).find(needle) != std::string::npos; }

// Straightforward recursive peeler used as an oracle.
void brute_peel(const Term& t, std::vector<std::string>& hyps, std::string& goal) {
  if (t.is_app_of("=>") && t.args().size() == 2) {
    if (t.arg(0).is_app_of("and")) {
      std::function<void(const Term&)> flat = [&](const Term& a) {
        if (a.is_app_of("and"))
          for (const auto& x : a.args()) flat(x);
        else
          hyps.push_back(print_term(a));
      };
      flat(t.arg(0));
    } else {
      hyps.push_back(print_term(t.arg(0)));
    }
    brute_peel(t.arg(1), hyps, goal);
    return;
  }
  goal = print_term(t);
}

bool eval(const Term& t, const std::map<std::string, bool>& env) {
  if (t.kind() == TermKind::BoolLit) return t.bool_value();
  if (t.is_symbol()) return env.at(t.text());
  auto h = t.head_name();
  auto args = t.args();
  if (h == "not") return !eval(args[0], env);
  if (h == "and") {
    for (const auto& a : args)
      if (!eval(a, env)) return false;
    return true;
  }
  if (h == "or") {
    for (const auto& a : args)
      if (eval(a, env)) return true;
    return false;
  }
  if (h == "=>") {
    bool r = eval(args.back(), env);
    for (std::size_t i = args.size() - 1; i-- > 0;) r = !eval(args[i], env) || r;
    return r;
  }
  throw std::runtime_error("unexpected head");
}

Term random_prop(std::mt19937& rng, int depth) {
  static const char* vars[] = {"p", "q", "r", "s"};
  std::uniform_int_distribution<int> d(0, depth <= 0 ? 1 : 6);
  switch (d(rng)) {
    case 0: return Term::symbol(vars[rng() % 4]);
    case 1: return Term::boolean(rng() % 2);
    case 2: return Term::app("not", {random_prop(rng, depth - 1)});
    case 3: return Term::app("or", {random_prop(rng, depth - 1), random_prop(rng, depth - 1)});
    case 4:
    case 5: {
      std::vector<Term> xs;
      int n = 2 + rng() % 2;
      for (int i = 0; i < n; ++i) xs.push_back(random_prop(rng, depth - 1));
      return Term::app("and", xs);
    }
    default: {
      std::vector<Term> xs;
      int n = 2 + rng() % 2;
      for (int i = 0; i < n; ++i) xs.push_back(random_prop(rng, depth - 1));
      return Term::app("=>", xs);
    }
  }
}

}  // namespace

TEST_CASE("triangle fixture has one block and the Set#IsMember axiom") {
  auto split = load("triangle_sum_even.smt2");
  CHECK(split.blocks.size() == 1);
  bool found = false;
  for (const auto& c : split.prelude) found = found || mentions(c, "(not (|Set#IsMember| |Set#Empty| o@@5))");
  CHECK(found);
}

TEST_CASE("script without push/pop is all prelude") {
  auto split = segment_script(parse_script("(declare-fun a () Int)\n(assert (> a 0))\n(check-sat)"));
  CHECK(split.blocks.empty());
  CHECK(split.prelude.size() == 3);
}

TEST_CASE("two concatenated blocks stay in order") {
  auto base = parse_script(testing::read_fixture("triangle_sum_even.smt2"));
  auto split = segment_script(base);
  auto cmds = split.reassemble();
  std::string text;
  for (const auto& c : base) text += print_command(c) + "\n";
  const auto& b = split.blocks[0];
  text += print_command(*b.push) + "\n";
  for (const auto& c : b.commands) text += print_command(c) + "\n";
  text += print_command(*b.pop) + "\n";
  auto twice = segment_script(parse_script(text));
  REQUIRE(twice.blocks.size() == 2);
  CHECK(twice.blocks[0].ordinal == 0);
  CHECK(twice.blocks[1].ordinal == 1);
  CHECK(twice.blocks[0].push->index < twice.blocks[1].push->index);
}

TEST_CASE("segmentation partitions the script") {
  for (const char* name : {"triangle_sum_even.smt2", "example_shadowing.smt2", "two_targets.smt2"}) {
    auto cmds = parse_script(testing::read_fixture(name));
    auto split = segment_script(cmds);
    std::size_t total = split.options.size() + split.prelude.size() + 2 * split.blocks.size();
    for (const auto& b : split.blocks) total += b.commands.size();
    CHECK(total == cmds.size());
    auto again = split.reassemble();
    REQUIRE(again.size() == cmds.size());
    for (std::size_t i = 0; i < cmds.size(); ++i) CHECK(print_command(again[i]) == print_command(cmds[i]));
  }
}

TEST_CASE("segmentation errors") {
  CHECK_THROWS_AS(segment_script(parse_script("(push 2)(pop 2)")), Error);
  CHECK_THROWS_AS(segment_script(parse_script("(push 1)")), Error);
  CHECK_THROWS_AS(segment_script(parse_script("(pop 1)")), Error);
  CHECK_THROWS_AS(segment_script(parse_script("(push 1)(push 1)(pop 1)(pop 1)")), Error);
}

TEST_CASE("triangle obligation") {
  auto split = load("triangle_sum_even_stock.smt2");
  auto ob = extract_obligation(split.blocks[0]);
  CHECK(print_term(ob.goal) == "(= (Mod (Mul |x#0@@1| (+ |x#0@@1| 1)) (LitInt 2)) (LitInt 0))");
  std::set<std::string> hyps;
  for (const auto& h : ob.hypotheses) hyps.insert(print_term(h));
  CHECK(hyps.contains("($IsGoodHeap $Heap)"));
  CHECK(hyps.contains("(= (ControlFlow 0 0) 2)"));
  CHECK(hyps.contains("(= (ControlFlow 0 2) (- 0 1))"));
  CHECK(ob.local_decls.size() >= 2);
}

TEST_CASE("obligation without implication") {
  auto split = segment_script(parse_script("(push 1)(declare-fun g () Bool)(assert (not g))(check-sat)(pop 1)"));
  auto ob = extract_obligation(split.blocks[0]);
  CHECK(ob.hypotheses.empty());
  CHECK(print_term(ob.goal) == "g");
}

TEST_CASE("nested implications peel in order") {
  auto split = segment_script(parse_script("(push 1)(assert (not (=> a (=> b (=> c g)))))(check-sat)(pop 1)"));
  auto ob = extract_obligation(split.blocks[0]);
  std::vector<std::string> hyps, expected;
  std::string goal;
  brute_peel(parse_term("(=> a (=> b (=> c g)))"), expected, goal);
  for (const auto& h : ob.hypotheses) hyps.push_back(print_term(h));
  CHECK(hyps == expected);
  CHECK(hyps == std::vector<std::string>{"a", "b", "c"});
  CHECK(print_term(ob.goal) == goal);
}

TEST_CASE("block shape errors") {
  auto block = [](const char* text) { return segment_script(parse_script(text)).blocks.at(0); };
  CHECK_THROWS_AS(extract_obligation(block("(push 1)(assert a)(check-sat)(pop 1)")), Error);
  CHECK_THROWS_AS(extract_obligation(block("(push 1)(assert (not a))(assert (not b))(check-sat)(pop 1)")), Error);
  CHECK_THROWS_AS(extract_obligation(block("(push 1)(assert (not a))(pop 1)")), Error);
}

TEST_CASE("let inlining keeps free symbols and respects its budget") {
  Term t = parse_term("(let ((a (+ x y))) (let ((b (* a a))) (forall ((z Int)) (> (+ b z) a))))");
  Term out = inline_lets(t);
  CHECK(print_term(out) == "(forall ((z Int)) (> (+ (* (+ x y) (+ x y)) z) (+ x y)))");
  CHECK_THROWS_AS(inline_lets(t, 5), Error);
  // a quantifier binding a name used by the let value would capture it
  CHECK_THROWS_AS(inline_lets(parse_term("(let ((a z)) (forall ((z Int)) (> a z)))")), Error);
  // shadowing by a quantifier hides the outer let
  CHECK(print_term(inline_lets(parse_term("(let ((a 1)) (forall ((a Int)) (> a 0)))"))) ==
        "(forall ((a Int)) (> a 0))");
}

TEST_CASE("peeling preserves validity on random propositional obligations") {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    Term body = random_prop(rng, 4);
    std::vector<Term> hyps;
    Term goal = peel_implications(body, hyps);
    std::vector<Term> conj = hyps;
    conj.push_back(Term::app("not", {goal}));
    Term peeled = conj.size() == 1 ? conj[0] : Term::app("and", conj);
    Term original = Term::app("not", {body});
    bool orig_sat = false, peeled_sat = false;
    for (int m = 0; m < 16; ++m) {
      std::map<std::string, bool> env{{"p", m & 1}, {"q", m & 2}, {"r", m & 4}, {"s", m & 8}};
      orig_sat = orig_sat || eval(original, env);
      peeled_sat = peeled_sat || eval(peeled, env);
    }
    INFO(print_term(body));
    CHECK(orig_sat == peeled_sat);
  }
}

TEST_CASE("ipm targets") {
  auto count = [](const std::string& name) {
    auto split = load(name);
    std::vector<Obligation> obs;
    for (const auto& b : split.blocks) obs.push_back(extract_obligation(b));
    auto targets = find_ipm_targets(obs);
    std::size_t marked = 0;
    for (const auto& o : obs) marked += o.is_ipm_target;
    CHECK(marked == targets.size());
    return targets;
  };
  CHECK(count("triangle_sum_even.smt2").size() == 1);
  CHECK(count("triangle_sum_even_stock.smt2").empty());
  auto two = count("two_targets.smt2");
  REQUIRE(two.size() == 2);
  CHECK(two[0].source->ordinal == 0);
  CHECK(two[1].source->ordinal == 2);
}
