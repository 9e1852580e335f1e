#include <algorithm>
#include <unordered_map>

#include "ipm/backtranslate.h"

namespace ipm::bt {

using sexpr::TermKind;

namespace {

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

bool is_wrapper(const Term& t) {
  if (!t.is_app() || t.args().size() != 1) return false;
  auto h = t.head_name();
  return is_box_head(h) || is_unbox_head(h) || is_lit_head(h);
}

std::size_t payload_index(const Term& app, ProtectionKind kind) {
  std::size_t trailing = kind == ProtectionKind::ToProve ? 3 : 2;
  if (app.args().size() < trailing)
    throw Error("protection call '" + std::string(app.head_name()) + "' has too few arguments");
  return app.args().size() - trailing;
}

class Stripper {
 public:
  Term go(const Term& t) {
    auto it = memo_.find(t.id());
    if (it != memo_.end()) return it->second;
    Term out = compute(t);
    memo_.emplace(t.id(), out);
    keep_.push_back(t);  // keeps ids stable while memoized
    return out;
  }

 private:
  std::unordered_map<const void*, Term> memo_;
  std::vector<Term> keep_;

  static bool is_scope(const Term& t) { return protection_kind(t) == ProtectionKind::Scope; }

  Term compute(const Term& t) {
    switch (t.kind()) {
      case TermKind::App: {
        if (auto kind = protection_kind(t)) {
          if (*kind == ProtectionKind::Scope) return Term::boolean(true);
          return go(t.arg(payload_index(t, *kind)));
        }
        // Unbox(protect(.., Box(p), ..)) is p again.
        if (is_unbox_head(t.head_name()) && t.args().size() == 1 && protection_kind(t.arg(0))) {
          const Term& prot = t.arg(0);
          auto kind = *protection_kind(prot);
          if (kind != ProtectionKind::Scope) {
            const Term& payload = prot.arg(payload_index(prot, kind));
            if (payload.is_app() && payload.args().size() == 1 && is_box_head(payload.head_name()))
              return go(payload.arg(0));
          }
        }
        bool conj = t.is_app_of("and");
        bool changed = false;
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const auto& a : t.args()) {
          if (conj && is_scope(a)) {
            changed = true;
            continue;
          }
          Term s = go(a);
          changed = changed || !s.same_node(a);
          args.push_back(std::move(s));
        }
        if (conj && args.empty()) return Term::boolean(true);
        if (conj && args.size() == 1) return args[0];
        if (!changed) return t;
        return Term::app(t.head(), std::move(args));
      }
      case TermKind::Quantifier: {
        Term b = go(t.body());
        if (b.same_node(t.body())) return t;
        return Term::quantifier(t.quant(), std::vector<sexpr::SortedVar>(t.vars().begin(), t.vars().end()), b);
      }
      case TermKind::Let: {
        bool changed = false;
        std::vector<sexpr::LetBinding> bs;
        for (const auto& b : t.bindings()) {
          Term v = go(b.value);
          changed = changed || !v.same_node(b.value);
          bs.push_back({b.name, v});
        }
        Term body = go(t.body());
        if (!changed && body.same_node(t.body())) return t;
        return Term::let(std::move(bs), body);
      }
      case TermKind::Annotated: {
        Term b = go(t.body());
        std::vector<sexpr::Attr> attrs;
        bool changed = !b.same_node(t.body());
        for (const auto& a : t.attrs()) {
          sexpr::Attr copy{a.key, a.value};
          if (const auto* v = std::get_if<Term>(&a.value)) {
            Term s = go(*v);
            changed = changed || !s.same_node(*v);
            copy.value = s;
          } else if (const auto* l = std::get_if<std::vector<Term>>(&a.value)) {
            std::vector<Term> pats;
            for (const auto& p : *l) {
              Term s = go(p);
              changed = changed || !s.same_node(p);
              pats.push_back(s);
            }
            copy.value = std::move(pats);
          }
          attrs.push_back(std::move(copy));
        }
        if (!changed) return t;
        return Term::annotated(b, std::move(attrs));
      }
      default:
        return t;
    }
  }
};

/* ---------------------------------------------------------------------- */

bool is_suppressed(const Term& t) {
  if (!t.is_app()) return false;
  auto h = t.head_name();
  if (h == "$IsGoodHeap" || h == "$IsHeapAnchor") return true;
  if (t.is_app_of("=") && t.args().size() == 2) {
    for (const auto& a : t.args()) {
      if (a.is_app_of("ControlFlow")) return true;
      if (a.is_symbol() && starts_with(a.text(), "$_ModifiesFrame@")) return true;
    }
  }
  return false;
}

class Displayer {
 public:
  explicit Displayer(const NameMap& names) : names_(names) {}

  std::optional<DisplayForm> top(const Term& t) {
    if (is_suppressed(t)) return DisplayForm{Suppressed{}};
    if (t.is_app_of("and")) {
      std::vector<ExprPtr> kept;
      for (const auto& a : t.args()) {
        auto d = top(a);
        if (!d) return std::nullopt;
        if (auto* e = std::get_if<ExprPtr>(&*d)) kept.push_back(*e);
      }
      if (kept.empty()) return DisplayForm{Suppressed{}};
      ExprPtr acc = kept[0];
      for (std::size_t i = 1; i < kept.size(); ++i) acc = Expr::binary(BinaryOp::And, acc, kept[i]);
      return DisplayForm{acc};
    }
    auto e = expr(t);
    if (!e) return std::nullopt;
    return DisplayForm{e};
  }

 private:
  const NameMap& names_;

  ExprPtr expr(const Term& t) {
    switch (t.kind()) {
      case TermKind::Symbol:
      case TermKind::QuotedSymbol:
        return Expr::var(names_.display_name(t.text()));
      case TermKind::IntLit:
        if (t.int_value() < 0) return Expr::unary(UnaryOp::Neg, Expr::int_const(-t.int_value()));
        return Expr::int_const(t.int_value());
      case TermKind::BoolLit:
        return Expr::bool_const(t.bool_value());
      case TermKind::App:
        return app(t);
      default:
        return nullptr;
    }
  }

  std::vector<ExprPtr> all(const Term& t) {
    std::vector<ExprPtr> out;
    for (const auto& a : t.args()) {
      auto e = expr(a);
      if (!e) return {};
      out.push_back(e);
    }
    return out;
  }

  ExprPtr app(const Term& t) {
    if (is_suppressed(t)) return nullptr;
    if (is_wrapper(t)) return expr(t.arg(0));
    auto h = t.head_name();
    auto args = all(t);
    if (args.size() != t.args().size()) return nullptr;
    std::size_t n = args.size();

    auto fold_left = [&](BinaryOp op) -> ExprPtr {
      if (n < 2) return nullptr;
      ExprPtr acc = args[0];
      for (std::size_t i = 1; i < n; ++i) acc = Expr::binary(op, acc, args[i]);
      return acc;
    };
    auto binary = [&](BinaryOp op) -> ExprPtr { return n == 2 ? Expr::binary(op, args[0], args[1]) : nullptr; };

    if (h == "+" || h == "Add") return fold_left(BinaryOp::Add);
    if (h == "*" || h == "Mul") return fold_left(BinaryOp::Mul);
    if (h == "-") {
      if (n == 1) return Expr::unary(UnaryOp::Neg, args[0]);
      return fold_left(BinaryOp::Sub);
    }
    if (h == "Sub") return binary(BinaryOp::Sub);
    if (h == "div" || h == "Div") return binary(BinaryOp::Div);
    if (h == "mod" || h == "Mod") return binary(BinaryOp::Mod);
    if (h == "=") return binary(BinaryOp::Eq);
    if (h == "distinct") return binary(BinaryOp::Neq);
    if (h == "<") return binary(BinaryOp::Lt);
    if (h == "<=") return binary(BinaryOp::Le);
    if (h == ">") return binary(BinaryOp::Gt);
    if (h == ">=") return binary(BinaryOp::Ge);
    if (h == "and") return fold_left(BinaryOp::And);
    if (h == "or") return fold_left(BinaryOp::Or);
    if (h == "=>") {
      if (n < 2) return nullptr;
      ExprPtr acc = args[n - 1];
      for (std::size_t i = n - 1; i-- > 0;) acc = Expr::binary(BinaryOp::Implies, args[i], acc);
      return acc;
    }
    if (h == "not" && n == 1) {
      const Expr& inner = *args[0];
      if (inner.kind == Expr::Kind::Binary && inner.bop == BinaryOp::Eq && t.arg(0).is_app_of("="))
        return Expr::binary(BinaryOp::Neq, inner.operands[0], inner.operands[1]);
      return Expr::unary(UnaryOp::Not, args[0]);
    }
    if (h == "ite" && n == 3) return Expr::ite(args[0], args[1], args[2]);
    return nullptr;
  }
};

void symbols_of(const Term& t, const NameMap& names, std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Symbol:
    case TermKind::QuotedSymbol:
      out.insert(names.display_name(t.text()));
      return;
    case TermKind::App:
      for (const auto& a : t.args()) symbols_of(a, names, out);
      return;
    case TermKind::Let:
      for (const auto& b : t.bindings()) symbols_of(b.value, names, out);
      symbols_of(t.body(), names, out);
      return;
    case TermKind::Quantifier:
    case TermKind::Annotated:
      symbols_of(t.body(), names, out);
      return;
    default:
      return;
  }
}

// `v == e` with a plain variable on the left: the name of v.
std::optional<std::string> defined_var(const DisplayedFormula& f) {
  if (!f.expr || f.expr->kind != Expr::Kind::Binary || f.expr->bop != BinaryOp::Eq) return std::nullopt;
  const Expr& lhs = *f.expr->operands[0];
  if (lhs.kind != Expr::Kind::Var) return std::nullopt;
  std::vector<std::string> rhs;
  collect_vars(*f.expr->operands[1], rhs);
  if (std::find(rhs.begin(), rhs.end(), lhs.name) != rhs.end()) return std::nullopt;
  return lhs.name;
}

}  // namespace

Term strip_protections(const Term& t) { return Stripper().go(t); }

std::optional<DisplayForm> display_rewrite(const Term& t, const NameMap& names) { return Displayer(names).top(t); }

DisplayedFormula display_formula(const Term& t, const NameMap& names, std::size_t index) {
  DisplayedFormula f;
  f.source_index = index;
  Term s = strip_protections(t);
  auto d = display_rewrite(s, names);
  bool trivial = s.kind() == TermKind::BoolLit && s.bool_value();
  if (trivial || (d && std::holds_alternative<Suppressed>(*d))) {
    f.suppressed = true;
    f.text = sexpr::print_term(s);
    return f;
  }
  if (d) {
    f.expr = std::get<ExprPtr>(*d);
    f.text = pretty_print(f.expr);
    std::vector<std::string> vs;
    collect_vars(*f.expr, vs);
    f.names.insert(vs.begin(), vs.end());
    return f;
  }
  f.text = sexpr::print_term(s);
  symbols_of(s, names, f.names);
  return f;
}

std::vector<DisplayedFormula> eliminate_dead_definitions(std::vector<DisplayedFormula> hyps,
                                                         const DisplayedFormula& goal) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      auto v = defined_var(hyps[i]);
      if (!v) continue;
      bool used = goal.names.contains(*v);
      for (std::size_t j = 0; j < hyps.size() && !used; ++j)
        if (j != i && hyps[j].names.contains(*v)) used = true;
      if (used) continue;
      hyps.erase(hyps.begin() + static_cast<std::ptrdiff_t>(i));
      changed = true;
      break;
    }
  }
  return hyps;
}

DisplayedObligation display_obligation(std::span<const Term> hypotheses, const Term& goal, const NameMap& names) {
  DisplayedObligation out{{}, display_formula(goal, names)};
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    auto f = display_formula(hypotheses[i], names, i);
    if (f.suppressed) continue;
    out.hypotheses.push_back(std::move(f));
  }
  out.hypotheses = eliminate_dead_definitions(std::move(out.hypotheses), out.goal);
  return out;
}

}  // namespace ipm::bt
