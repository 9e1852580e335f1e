#include <doctest.h>

#include <random>
#include <sstream>

#include "ipm/dafny.h"
#include "../support/fixtures.h"

using namespace ipm;
using namespace ipm::dafny;

namespace {

std::string squash(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

int level(const std::string& op) {
  if (op == "<==>") return 0;
  if (op == "==>") return 1;
  if (op == "||") return 2;
  if (op == "&&") return 3;
  if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
  if (op == "+" || op == "-") return 5;
  return 6;
}

// Visible variables at each {:ipm} line, computed from the text alone.
std::vector<std::vector<std::string>> scan_scopes(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::vector<std::string>> frames;
  std::istringstream in(text);
  std::string line;
  auto visible = [&] {
    std::vector<std::string> v;
    for (const auto& f : frames)
      for (const auto& n : f)
        if (std::find(v.begin(), v.end(), n) == v.end()) v.push_back(n);
    return v;
  };
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::string w;
    words >> w;
    if (w == "method") {
      frames.assign(1, {});
      std::string params = line.substr(line.find('(') + 1);
      std::istringstream ps(params);
      std::string tok;
      while (ps >> tok)
        if (tok != ":" && tok != "int," && tok != "int)" && tok != "int") frames[0].push_back(tok);
      continue;
    }
    if (w == "var") {
      std::string name;
      words >> name;
      frames.back().push_back(name);
    }
    if (line.find("{:ipm}") != std::string::npos) out.push_back(visible());
    for (char c : line) {
      if (c == '{' && line.find("{:ipm}") == std::string::npos) frames.emplace_back();
      if (c == '}' && line.find("{:ipm}") == std::string::npos) frames.pop_back();
    }
  }
  return out;
}

std::string random_method(std::mt19937& rng) {
  static const char* names[] = {"a", "b", "c", "x", "y"};
  std::ostringstream os;
  os << "method M(a : int, b : int)\n{\n";
  int depth = 1;
  int budget = 12;
  while (budget-- > 0) {
    std::string pad(2 * depth, ' ');
    switch (rng() % 5) {
      case 0:
      case 1:
        os << pad << "var " << names[rng() % 5] << " : int := 1;\n";
        break;
      case 2:
        os << pad << "assert {:ipm} a + b > 0;\n";
        break;
      case 3:
        if (depth < 4) {
          os << pad << "if a > 0 {\n";
          ++depth;
        }
        break;
      default:
        if (depth > 1) {
          --depth;
          os << std::string(2 * depth, ' ') << "}\n";
        }
        break;
    }
  }
  while (depth > 1) {
    --depth;
    os << std::string(2 * depth, ' ') << "}\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace

TEST_CASE("figure 1 lemma") {
  auto unit = parse_program(testing::read_fixture("figure1.dfy"));
  REQUIRE(unit.decls.size() == 1);
  const auto& d = unit.decls[0];
  CHECK(d.kind == Decl::Kind::Lemma);
  CHECK(d.name == "triangle_sum_even");
  REQUIRE(d.clauses.size() == 1);
  CHECK(d.clauses[0].kind == Clause::Kind::Ensures);
  CHECK(pretty_print(d.clauses[0].expr) == "(((x * (x + 1)) % 2) == 0)");
  REQUIRE(d.body.size() == 1);
  CHECK(d.body[0]->kind == Stmt::Kind::Assume);
  CHECK(pretty_print(d.body[0]->expr) == "false");
}

TEST_CASE("empty program") { CHECK(parse_program("").decls.empty()); }

TEST_CASE("Example method") {
  auto unit = parse_program(testing::read_fixture("example.dfy"));
  REQUIRE(unit.decls.size() == 1);
  const auto& d = unit.decls[0];
  CHECK(d.kind == Decl::Kind::Method);
  REQUIRE(d.params.size() == 2);
  CHECK(d.params[0].type.name == "nat");
  REQUIRE(d.clauses.size() == 2);
  CHECK(d.clauses[0].kind == Clause::Kind::Requires);
  REQUIRE(d.body.size() == 2);
  CHECK(d.body[0]->kind == Stmt::Kind::VarDecl);
  CHECK(d.body[0]->name == "x");
  CHECK(d.body[1]->kind == Stmt::Kind::Assert);
  CHECK(d.body[1]->has_attr("ipm"));
}

TEST_CASE("unsupported constructs are named") {
  auto message = [](std::string_view text) -> std::string {
    try {
      parse_program(text);
    } catch (const ParseError& e) {
      return e.message();
    }
    return "";
  };
  CHECK(message("method M(n : int) { while n > 0 { } }") == "unsupported construct 'while'");
  CHECK(message("class C { }") == "unsupported construct 'class'");
  CHECK(message("method M(a : array<int>) { }") == "unsupported construct 'array'");
  CHECK(message("method M() returns (r : int) { }") == "unsupported construct 'returns'");
  CHECK(message("method _M() { }").find("reserved") != std::string::npos);
  CHECK(message("method M(x : int, x : int) { }") == "duplicate parameter 'x'");
  CHECK(message("method M(x : int) requires {:ipm} x > 0 { }").find("attributes") != std::string::npos);
  CHECK(message("method M(x : int) { assert 1 < x < 3; }").find("chain") != std::string::npos);
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_program("lemma L(x : int)\n  ensures x +\n{ }");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 1);
  }
}

TEST_CASE("Example instruments to the golden listing") {
  auto unit = parse_program(testing::read_fixture("example.dfy"));
  auto r = instrument(unit);
  CHECK(r.targets == 1);
  CHECK(squash(r.text) == squash(testing::read_fixture("example_instrumented.dfy")));
  CHECK(r.text.find("[_protectScope(x, \"x\"), _protectScope(y, \"y\")]") != std::string::npos);

  auto back = parse_program(r.text, {.allow_reserved = true});
  CHECK(equal(strip_instrumentation(back), unit));
}

TEST_CASE("instrumented output only uses the reserved ghost names") {
  auto r = instrument(parse_program(testing::read_fixture("example.dfy")));
  auto back = parse_program(r.text, {.allow_reserved = true});
  std::function<void(const Expr&)> check = [&](const Expr& e) {
    if (!e.name.empty() && e.name.front() == '_' && e.kind != Expr::Kind::StringConst)
      CHECK((e.name == "_protect" || e.name == "_protectScope" || e.name == "_protectToProve"));
    for (const auto& o : e.operands) check(*o);
  };
  for (const auto& d : back.decls)
    for (const auto& c : d.clauses) check(*c.expr);
}

TEST_CASE("declarations without {:ipm} only gain the ghost functions") {
  std::string text = testing::read_fixture("figure1.dfy");
  auto r = instrument(parse_program(text));
  CHECK(r.targets == 0);
  CHECK(r.warnings.size() == 1);
  // the ensures clause is still protected
  CHECK(r.text.find("_protect(x, \"x\") * (_protect(x, \"x\") + 1) % 2 == 0") != std::string::npos);
  CHECK(r.text.starts_with(kGhostFunctions));
}

TEST_CASE("figure 1 with {:ipm} on the ensures clause") {
  auto unit = parse_program(testing::read_fixture("triangle_sum_even.dfy"));
  auto r = instrument(unit);
  CHECK(r.text.find("ensures {:ipm} _protectToProve(_protect(x, \"x\") * (_protect(x, \"x\") + 1) % 2 == 0, "
                    "\"x * (x + 1) % 2 == 0\", [_protectScope(x, \"x\")])") != std::string::npos);
  auto scopes = ipm_scopes(unit);
  REQUIRE(scopes.size() == 1);
  CHECK(scopes[0] == std::vector<std::string>{"x"});
  CHECK(equal(strip_instrumentation(parse_program(r.text, {.allow_reserved = true})), unit));
}

TEST_CASE("scope lists match a textual scope walk") {
  std::mt19937 rng(99);
  int sites = 0;
  for (int i = 0; i < 200; ++i) {
    std::string text = random_method(rng);
    auto unit = parse_program(text);
    auto expected = scan_scopes(text);
    INFO(text);
    CHECK(ipm_scopes(unit) == expected);
    sites += static_cast<int>(expected.size());
    auto r = instrument(unit);
    CHECK(equal(strip_instrumentation(parse_program(r.text, {.allow_reserved = true})), unit));
  }
  CHECK(sites > 50);
}

TEST_CASE("operator precedence table") {
  const std::vector<std::string> ops = {"<==>", "==>", "||", "&&", "==", "<", "+", "-", "*", "%"};
  for (const auto& a : ops) {
    for (const auto& b : ops) {
      std::string text = "p " + a + " q " + b + " r";
      int la = level(a), lb = level(b);
      INFO(text);
      if (la == 4 && lb == 4) {
        CHECK_THROWS_AS(parse_expression(text), ParseError);
        continue;
      }
      std::string pa = a == "<==>" ? "<==>" : a, pb = b;
      std::string left = "((p " + pa + " q) " + pb + " r)";
      std::string right = "(p " + pa + " (q " + pb + " r))";
      std::string expected;
      if (la > lb)
        expected = left;
      else if (la < lb)
        expected = right;
      else
        expected = la == 1 ? right : left;
      CHECK(pretty_print(parse_expression(text)) == expected);
    }
  }
  CHECK(pretty_print(parse_expression("a + b * c")) == "(a + (b * c))");
  CHECK(pretty_print(parse_expression("a ==> b ==> c")) == "(a ==> (b ==> c))");
  CHECK(pretty_print(parse_expression("-a * !b")) == "((-a) * (!b))");
  CHECK(pretty_print(parse_expression("if a then b else c + 1")) == "(if a then b else (c + 1))");
}

TEST_CASE("tactic arguments become solver terms") {
  bt::NameMap names;
  names.add("x", "x#0@@1", true);
  ExprContext ctx{&names, {}};
  CHECK(print_term(parse_expr("(x % 2) == 0", ctx)) == "(= (Mod |x#0@@1| (LitInt 2)) (LitInt 0))");
  CHECK(parse_expr("true", ctx) == sexpr::Term::boolean(true));
  CHECK(print_term(parse_expr("x * (x + 1) == 2 * ((x / 2) * (x + 1))", ctx)) ==
        "(= (Mul |x#0@@1| (+ |x#0@@1| (LitInt 1))) (Mul (LitInt 2) (Mul (Div |x#0@@1| (LitInt 2)) (+ |x#0@@1| "
        "(LitInt 1)))))");
  CHECK(print_term(parse_expr("x != 1 <==> !(x == 1)", ctx)) ==
        "(= (not (= |x#0@@1| (LitInt 1))) (not (= |x#0@@1| (LitInt 1))))");
  CHECK(print_term(parse_expr("x#0@@1 > -1", ctx)) == "(> |x#0@@1| (- (LitInt 1)))");
}

TEST_CASE("tactic argument errors") {
  bt::NameMap names;
  names.add("x", "x#0@@1", true);
  names.add("y", "y#0@@1", false);
  ExprContext ctx{&names, {{"b#0", Sort::Bool}}};
  auto message = [&](std::string_view text) -> std::string {
    try {
      parse_expr(text, ctx);
    } catch (const Error& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message("z > 0") == "unknown identifier 'z'; known identifiers: x, y");
  CHECK(message("x + 1").find("boolean") != std::string::npos);
  CHECK(message("b#0 + 1").find("expects int") != std::string::npos);
  CHECK(message("x > ").find("expected an expression") != std::string::npos);
  CHECK(message("f(x) > 0").find("function calls") != std::string::npos);
  CHECK(message("b#0 && x > 0").empty());
}
