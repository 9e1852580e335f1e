#include "ipm/dafny.h"

namespace ipm::dafny {

namespace detail {
ExprPtr parse_tactic_expression(std::string_view text);
}

namespace {

using sexpr::Term;

const char* sort_name(Sort s) { return s == Sort::Int ? "int" : "bool"; }

class Translator {
 public:
  explicit Translator(const ExprContext& ctx) : ctx_(ctx) {}

  struct Typed {
    Term term;
    Sort sort;
  };

  Typed go(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Var:
        return var(e.name);
      case Expr::Kind::IntConst:
        return {Term::app("LitInt", {Term::integer(e.value)}), Sort::Int};
      case Expr::Kind::BoolConst:
        return {Term::boolean(e.flag), Sort::Bool};
      case Expr::Kind::Unary: {
        Typed a = go(*e.operands[0]);
        if (e.uop == UnaryOp::Neg) {
          want(a, Sort::Int, "-");
          return {Term::app("-", {a.term}), Sort::Int};
        }
        want(a, Sort::Bool, "!");
        return {Term::app("not", {a.term}), Sort::Bool};
      }
      case Expr::Kind::Binary:
        return binary(e);
      case Expr::Kind::Ite: {
        Typed c = go(*e.operands[0]);
        want(c, Sort::Bool, "if");
        Typed t = go(*e.operands[1]);
        Typed f = go(*e.operands[2]);
        if (t.sort != f.sort)
          throw Error(std::string("branches of 'if' have different types: ") + sort_name(t.sort) + " and " +
                      sort_name(f.sort));
        return {Term::app("ite", {c.term, t.term, f.term}), t.sort};
      }
      case Expr::Kind::Call:
        throw Error("function calls are not supported in tactic arguments: '" + e.name + "'");
      case Expr::Kind::StringConst:
        throw Error("string literals are not supported in tactic arguments");
      case Expr::Kind::SeqDisplay:
        throw Error("sequence displays are not supported in tactic arguments");
    }
    throw Error("unsupported expression");
  }

 private:
  const ExprContext& ctx_;

  static void want(const Typed& t, Sort s, std::string_view op) {
    if (t.sort != s)
      throw Error("operator '" + std::string(op) + "' expects " + sort_name(s) + " but got " + sort_name(t.sort));
  }

  Sort sort_of(const std::string& smt) const {
    auto it = ctx_.symbols.find(smt);
    return it == ctx_.symbols.end() ? Sort::Int : it->second;
  }

  Typed var(const std::string& name) {
    if (ctx_.names) {
      if (auto smt = ctx_.names->smt_name(name)) return {Term::identifier(*smt), sort_of(*smt)};
      auto all = ctx_.names->smt_names(name);
      if (!all.empty()) {
        std::string msg = "identifier '" + name + "' is ambiguous; use one of";
        for (const auto& s : all) msg += " " + s;
        throw Error(msg);
      }
      if (ctx_.names->dafny_name(name)) return {Term::identifier(name), sort_of(name)};
    }
    if (ctx_.symbols.contains(name)) return {Term::identifier(name), sort_of(name)};
    std::string msg = "unknown identifier '" + name + "'";
    std::vector<std::string> known;
    if (ctx_.names) known = ctx_.names->dafny_names();
    if (known.empty()) {
      msg += "; no identifiers are known";
    } else {
      msg += "; known identifiers:";
      for (std::size_t i = 0; i < known.size(); ++i) msg += (i ? ", " : " ") + known[i];
    }
    throw Error(msg);
  }

  Typed binary(const Expr& e) {
    Typed l = go(*e.operands[0]);
    Typed r = go(*e.operands[1]);
    std::string op(op_text(e.bop));
    auto arith = [&](const char* head) -> Typed {
      want(l, Sort::Int, op);
      want(r, Sort::Int, op);
      return {Term::app(head, {l.term, r.term}), Sort::Int};
    };
    auto compare = [&](const char* head) -> Typed {
      want(l, Sort::Int, op);
      want(r, Sort::Int, op);
      return {Term::app(head, {l.term, r.term}), Sort::Bool};
    };
    auto logic = [&](const char* head) -> Typed {
      want(l, Sort::Bool, op);
      want(r, Sort::Bool, op);
      return {Term::app(head, {l.term, r.term}), Sort::Bool};
    };
    switch (e.bop) {
      case BinaryOp::Add: return arith("+");
      case BinaryOp::Sub: return arith("-");
      case BinaryOp::Mul: return arith("Mul");
      case BinaryOp::Div: return arith("Div");
      case BinaryOp::Mod: return arith("Mod");
      case BinaryOp::Lt: return compare("<");
      case BinaryOp::Le: return compare("<=");
      case BinaryOp::Gt: return compare(">");
      case BinaryOp::Ge: return compare(">=");
      case BinaryOp::And: return logic("and");
      case BinaryOp::Or: return logic("or");
      case BinaryOp::Implies: return logic("=>");
      case BinaryOp::Iff: return logic("=");
      case BinaryOp::Eq:
      case BinaryOp::Neq: {
        if (l.sort != r.sort)
          throw Error("operator '" + op + "' compares " + sort_name(l.sort) + " with " + sort_name(r.sort));
        Term eq = Term::app("=", {l.term, r.term});
        if (e.bop == BinaryOp::Neq) eq = Term::app("not", {eq});
        return {eq, Sort::Bool};
      }
    }
    throw Error("unsupported operator");
  }
};

}  // namespace

sexpr::Term to_smt(const Expr& e, const ExprContext& ctx) {
  auto typed = Translator(ctx).go(e);
  if (typed.sort != Sort::Bool) throw Error("expression must be boolean, but it has type int");
  return typed.term;
}

sexpr::Term parse_expr(std::string_view text, const ExprContext& ctx) {
  return to_smt(*detail::parse_tactic_expression(text), ctx);
}

}  // namespace ipm::dafny
