#include <algorithm>
#include <cctype>

#include "ipm/dafny.h"

namespace ipm::dafny {

const char* const kGhostFunctions =
    "function _protect<T>(x: T, name: string): T\n"
    "  { x }\n"
    "function _protectScope<T>(\n"
    "  x: T, name: string): bool { true }\n"
    "function _protectToProve<T>(\n"
    "  x: T, name: string, scope: seq<bool>): T { x }\n";

namespace {

bool is_ghost_helper(const std::string& name) {
  return name == "_protect" || name == "_protectScope" || name == "_protectToProve";
}

struct Edit {
  std::size_t begin;
  std::size_t end;
  std::string text;
};

std::string dafny_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string normalize_space(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

void var_edits(const Expr& e, std::vector<Edit>& out) {
  if (e.kind == Expr::Kind::Var) {
    out.push_back({e.span.begin, e.span.end, "_protect(" + e.name + ", " + dafny_string(e.name) + ")"});
    return;
  }
  for (const auto& o : e.operands) var_edits(*o, out);
}

std::string splice(std::string_view text, std::size_t base, std::vector<Edit> edits) {
  std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) { return a.begin < b.begin; });
  std::string out;
  std::size_t pos = base;
  for (const auto& e : edits) {
    out.append(text.substr(pos, e.begin - pos));
    out += e.text;
    pos = e.end;
  }
  out.append(text.substr(pos));
  return out;
}

// Visible names, innermost binding winning, in order of first introduction.
class ScopeStack {
 public:
  void push() { frames_.emplace_back(); }
  void pop() { frames_.pop_back(); }
  void bind(const std::string& name) { frames_.back().push_back(name); }
  std::vector<std::string> visible() const {
    std::vector<std::string> out;
    for (const auto& f : frames_)
      for (const auto& n : f)
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    return out;
  }

 private:
  std::vector<std::vector<std::string>> frames_;
};

class Instrumenter {
 public:
  explicit Instrumenter(const SourceUnit& unit) : text_(unit.text) {}

  std::vector<Edit> edits;
  std::vector<std::vector<std::string>> scopes;

  void decl(const Decl& d) {
    ScopeStack scope;
    scope.push();
    for (const auto& p : d.params) scope.bind(p.name);
    for (const auto& c : d.clauses) {
      if (c.has_attr("ipm"))
        target(*c.expr, scope.visible());
      else
        protect(*c.expr);
    }
    body(d.body, scope);
  }

 private:
  std::string_view text_;

  void protect(const Expr& e) { var_edits(e, edits); }

  void target(const Expr& e, const std::vector<std::string>& visible) {
    std::vector<Edit> inner;
    var_edits(e, inner);
    std::string_view src = text_.substr(e.span.begin, e.span.end - e.span.begin);
    std::string text = "_protectToProve(" + splice(text_.substr(0, e.span.end), e.span.begin, inner) + ", " +
                       dafny_string(normalize_space(src)) + ", [";
    for (std::size_t i = 0; i < visible.size(); ++i) {
      if (i) text += ", ";
      text += "_protectScope(" + visible[i] + ", " + dafny_string(visible[i]) + ")";
    }
    text += "])";
    edits.push_back({e.span.begin, e.span.end, text});
    scopes.push_back(visible);
  }

  void body(const std::vector<StmtPtr>& stmts, ScopeStack& scope) {
    scope.push();
    for (const auto& s : stmts) {
      switch (s->kind) {
        case Stmt::Kind::VarDecl:
          scope.bind(s->name);
          break;
        case Stmt::Kind::Assert:
          if (s->has_attr("ipm"))
            target(*s->expr, scope.visible());
          else
            protect(*s->expr);
          if (s->by) body(*s->by, scope);
          break;
        case Stmt::Kind::Assume:
          break;
        case Stmt::Kind::If:
          body(s->then_body, scope);
          if (s->else_body) body(*s->else_body, scope);
          break;
      }
    }
    scope.pop();
  }
};

/* ---------------------------------------------------------------------- */

ExprPtr strip(const ExprPtr& e) {
  if (e->kind == Expr::Kind::Call && (e->name == "_protect" || e->name == "_protectToProve") &&
      !e->operands.empty())
    return strip(e->operands[0]);
  if (e->operands.empty()) return e;
  auto copy = std::make_shared<Expr>(*e);
  for (auto& o : copy->operands) o = strip(o);
  return copy;
}

std::vector<StmtPtr> strip(const std::vector<StmtPtr>& stmts) {
  std::vector<StmtPtr> out;
  for (const auto& s : stmts) {
    auto copy = std::make_shared<Stmt>(*s);
    if (copy->expr) copy->expr = strip(copy->expr);
    if (copy->by) copy->by = strip(*copy->by);
    copy->then_body = strip(copy->then_body);
    if (copy->else_body) copy->else_body = strip(*copy->else_body);
    out.push_back(copy);
  }
  return out;
}

bool same(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return ipm::equal(*a, *b);
}

bool same(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b);

bool same(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.name != b.name || a.type != b.type || a.attrs != b.attrs) return false;
  if (!same(a.expr, b.expr)) return false;
  if (a.by.has_value() != b.by.has_value() || (a.by && !same(*a.by, *b.by))) return false;
  if (!same(a.then_body, b.then_body)) return false;
  if (a.else_body.has_value() != b.else_body.has_value()) return false;
  return !a.else_body || same(*a.else_body, *b.else_body);
}

bool same(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(*a[i], *b[i])) return false;
  return true;
}

bool same(const Decl& a, const Decl& b) {
  if (a.kind != b.kind || a.name != b.name || a.type_params != b.type_params || a.params != b.params ||
      a.result != b.result || a.ghost != b.ghost || a.clauses.size() != b.clauses.size())
    return false;
  for (std::size_t i = 0; i < a.clauses.size(); ++i) {
    const auto& x = a.clauses[i];
    const auto& y = b.clauses[i];
    if (x.kind != y.kind || x.attrs != y.attrs || !same(x.expr, y.expr)) return false;
  }
  return same(a.body, b.body) && same(a.function_body, b.function_body);
}

}  // namespace

InstrumentResult instrument(const SourceUnit& unit) {
  Instrumenter ins(unit);
  for (const auto& d : unit.decls) {
    if (is_ghost_helper(d.name)) continue;
    ins.decl(d);
  }
  InstrumentResult r;
  r.targets = ins.scopes.size();
  if (r.targets == 0) r.warnings.push_back("no {:ipm} annotation found; nothing will be proved interactively");
  r.text = std::string(kGhostFunctions) + "\n" + splice(unit.text, 0, ins.edits);
  return r;
}

std::vector<std::vector<std::string>> ipm_scopes(const SourceUnit& unit) {
  Instrumenter ins(unit);
  for (const auto& d : unit.decls)
    if (!is_ghost_helper(d.name)) ins.decl(d);
  return ins.scopes;
}

SourceUnit strip_instrumentation(const SourceUnit& unit) {
  SourceUnit out;
  out.text = unit.text;
  for (const auto& d : unit.decls) {
    if (d.kind == Decl::Kind::Function && is_ghost_helper(d.name)) continue;
    Decl copy = d;
    for (auto& c : copy.clauses) c.expr = strip(c.expr);
    copy.body = strip(copy.body);
    if (copy.function_body) copy.function_body = strip(copy.function_body);
    out.decls.push_back(std::move(copy));
  }
  return out;
}

bool equal(const SourceUnit& a, const SourceUnit& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i)
    if (!same(a.decls[i], b.decls[i])) return false;
  return true;
}

}  // namespace ipm::dafny
