#include "ipm/sexpr.h"

namespace ipm::sexpr {

namespace {

[[noreturn]] void fail(const std::string& msg, const SExpr& at) {
  throw ParseError(msg, at.pos.line, at.pos.column);
}

BigInt numeral_value(const SExpr& e) {
  std::string_view digits = e.raw;
  bool negative = false;
  if (!digits.empty() && digits.front() == '-') {
    negative = true;
    digits.remove_prefix(1);
  }
  BigInt v{std::string(digits)};
  return negative ? BigInt(-v) : v;
}

std::vector<SortedVar> to_sorted_vars(const SExpr& list) {
  if (!list.is_list || list.items.empty()) fail("expected a non-empty list of sorted variables", list);
  std::vector<SortedVar> vars;
  for (const auto& sv : list.items) {
    if (!sv.is_list || sv.items.size() != 2 || sv.items[0].is_list ||
        (sv.items[0].atom != AtomKind::Symbol && sv.items[0].atom != AtomKind::QuotedSymbol))
      fail("malformed sorted variable", sv);
    vars.push_back({sv.items[0].text, to_term(sv.items[1])});
  }
  return vars;
}

std::vector<LetBinding> to_let_bindings(const SExpr& list) {
  if (!list.is_list || list.items.empty()) fail("expected a non-empty list of let bindings", list);
  std::vector<LetBinding> out;
  for (const auto& b : list.items) {
    if (!b.is_list || b.items.size() != 2 || b.items[0].is_list ||
        (b.items[0].atom != AtomKind::Symbol && b.items[0].atom != AtomKind::QuotedSymbol))
      fail("malformed let binding", b);
    out.push_back({b.items[0].text, to_term(b.items[1])});
  }
  return out;
}

std::vector<Attr> to_attrs(const std::vector<SExpr>& items, std::size_t from) {
  std::vector<Attr> attrs;
  std::size_t i = from;
  while (i < items.size()) {
    const SExpr& k = items[i];
    if (k.is_list || k.atom != AtomKind::Keyword) fail("expected attribute keyword", k);
    Attr a{k.text, std::monostate{}};
    ++i;
    if (i < items.size() && (items[i].is_list || items[i].atom != AtomKind::Keyword)) {
      const SExpr& v = items[i];
      if (k.text == ":pattern") {
        if (!v.is_list || v.items.empty()) fail("expected a list of pattern terms", v);
        std::vector<Term> pats;
        for (const auto& p : v.items) pats.push_back(to_term(p));
        a.value = std::move(pats);
      } else {
        a.value = to_term(v);
      }
      ++i;
    }
    attrs.push_back(std::move(a));
  }
  return attrs;
}

Term atom_to_term(const SExpr& e) {
  switch (e.atom) {
    case AtomKind::Symbol:
      if (e.text == "true") return Term::boolean(true);
      if (e.text == "false") return Term::boolean(false);
      return Term::symbol(e.text);
    case AtomKind::QuotedSymbol:
      return Term::quoted(e.text);
    case AtomKind::Numeral:
      return Term::integer(numeral_value(e));
    case AtomKind::Decimal:
    case AtomKind::Hexadecimal:
    case AtomKind::Binary:
      return Term::other_literal(e.raw);
    case AtomKind::String:
      return Term::string(e.text);
    case AtomKind::Keyword:
      break;
  }
  fail("unexpected keyword '" + e.raw + "' in term position", e);
}

}  // namespace

Term to_term(const SExpr& e) {
  if (!e.is_list) return atom_to_term(e);
  if (e.items.empty()) fail("empty application", e);
  const SExpr& first = e.items.front();
  const std::size_t n = e.items.size();

  if (first.is_symbol("forall") || first.is_symbol("exists") || first.is_symbol("lambda")) {
    if (n != 3) fail("binder expects a variable list and a body", e);
    Quant q = first.text == "forall" ? Quant::Forall : first.text == "exists" ? Quant::Exists : Quant::Lambda;
    return Term::quantifier(q, to_sorted_vars(e.items[1]), to_term(e.items[2]));
  }
  if (first.is_symbol("let")) {
    if (n != 3) fail("let expects a binding list and a body", e);
    return Term::let(to_let_bindings(e.items[1]), to_term(e.items[2]));
  }
  if (first.is_symbol("!")) {
    if (n < 3) fail("annotation expects a term and at least one attribute", e);
    return Term::annotated(to_term(e.items[1]), to_attrs(e.items, 2));
  }
  if (first.is_symbol("match")) fail("'match' terms are not supported", e);
  // (- n) is the SMT-LIB spelling of a negative literal.
  if (first.is_symbol("-") && n == 2 && !e.items[1].is_list && e.items[1].atom == AtomKind::Numeral &&
      e.items[1].raw.front() != '-')
    return Term::integer(-numeral_value(e.items[1]));
  if (n == 1) fail("application without arguments", e);

  std::vector<Term> args;
  args.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) args.push_back(to_term(e.items[i]));
  return Term::app(to_term(first), std::move(args));
}

Term parse_term(std::string_view text) {
  auto all = read_sexprs(text);
  if (all.size() != 1) throw ParseError("expected exactly one term", 1, 1);
  return to_term(all.front());
}

Command to_command(const SExpr& e) {
  if (!e.is_list || e.items.empty() || e.items[0].is_list || e.items[0].atom != AtomKind::Symbol)
    fail("expected a command", e);
  Command c;
  c.raw = e;
  const std::string& word = e.items[0].text;
  const std::size_t n = e.items.size();
  auto declared = [&](CommandKind kind) {
    if (n < 2 || e.items[1].is_list) fail("'" + word + "' expects a symbol", e);
    c.kind = kind;
    c.name = e.items[1].text;
  };
  auto level = [&](CommandKind kind) {
    c.kind = kind;
    c.count = 1;
    if (n > 2) fail("'" + word + "' takes at most one numeral", e);
    if (n == 2) {
      const SExpr& a = e.items[1];
      if (a.is_list || a.atom != AtomKind::Numeral || a.raw.front() == '-')
        fail("'" + word + "' expects a numeral", a);
      c.count = static_cast<unsigned>(std::stoul(a.raw));
    }
  };

  if (word == "set-option") {
    if (n < 2 || e.items[1].is_list || e.items[1].atom != AtomKind::Keyword)
      fail("set-option expects a keyword", e);
    c.kind = CommandKind::SetOption;
    c.name = e.items[1].text;
    for (std::size_t i = 2; i < n; ++i) {
      if (i > 2) c.value += ' ';
      c.value += print_sexpr(e.items[i]);
    }
  } else if (word == "declare-fun" || word == "declare-const") {
    declared(CommandKind::DeclareFun);
  } else if (word == "declare-sort" || word == "define-sort") {
    declared(CommandKind::DeclareSort);
  } else if (word == "define-fun" || word == "define-fun-rec" || word == "define-const") {
    declared(CommandKind::DefineFun);
  } else if (word == "assert") {
    if (n != 2) fail("assert expects exactly one term", e);
    c.kind = CommandKind::Assert;
    c.term = to_term(e.items[1]);
  } else if (word == "push") {
    level(CommandKind::Push);
  } else if (word == "pop") {
    level(CommandKind::Pop);
  } else if (word == "check-sat") {
    c.kind = CommandKind::CheckSat;
  } else {
    c.kind = CommandKind::Other;
    c.name = word;
  }
  return c;
}

std::vector<Command> parse_script(std::string_view text) {
  auto exprs = read_sexprs(text);
  std::vector<Command> out;
  out.reserve(exprs.size());
  for (std::size_t i = 0; i < exprs.size(); ++i) {
    out.push_back(to_command(exprs[i]));
    out.back().index = i;
  }
  return out;
}

std::string print_command(const Command& c) {
  if (c.kind == CommandKind::Assert) return "(assert " + print_term(*c.term) + ")";
  return print_sexpr(c.raw);
}

}  // namespace ipm::sexpr
