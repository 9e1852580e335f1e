#include "ipm/sexpr.h"

#include <cassert>

namespace ipm::sexpr {

namespace {

std::shared_ptr<Term::Node> make(TermKind kind) {
  auto n = std::make_shared<Term::Node>();
  n->kind = kind;
  return n;
}

std::size_t attr_size(const Attr& a) {
  if (const auto* t = std::get_if<Term>(&a.value)) return t->size();
  std::size_t s = 0;
  if (const auto* l = std::get_if<std::vector<Term>>(&a.value))
    for (const auto& t : *l) s += t.size();
  return s;
}

}  // namespace

bool is_simple_symbol(std::string_view name) {
  if (name.empty()) return false;
  if (name.front() >= '0' && name.front() <= '9') return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    if (!ok) {
      switch (c) {
        case '~': case '!': case '@': case '$': case '%': case '^': case '&': case '*':
        case '_': case '-': case '+': case '=': case '<': case '>': case '.': case '?':
        case '/':
          ok = true;
          break;
        default:
          break;
      }
    }
    if (!ok) return false;
  }
  // A lone '-' followed by digits would read back as a negative numeral.
  if (name.size() > 1 && name.front() == '-' &&
      name.find_first_not_of("0123456789", 1) == std::string_view::npos)
    return false;
  return true;
}

Term Term::symbol(std::string name) {
  auto n = make(TermKind::Symbol);
  n->text = std::move(name);
  return Term(std::move(n));
}

Term Term::quoted(std::string name) {
  auto n = make(TermKind::QuotedSymbol);
  n->text = std::move(name);
  return Term(std::move(n));
}

Term Term::identifier(std::string name) {
  if (is_simple_symbol(name) && name != "true" && name != "false") return symbol(std::move(name));
  return quoted(std::move(name));
}

Term Term::integer(BigInt value) {
  auto n = make(TermKind::IntLit);
  n->integer = std::move(value);
  return Term(std::move(n));
}

Term Term::boolean(bool value) {
  auto n = make(TermKind::BoolLit);
  n->boolean = value;
  return Term(std::move(n));
}

Term Term::string(std::string value) {
  auto n = make(TermKind::StringLit);
  n->text = std::move(value);
  return Term(std::move(n));
}

Term Term::other_literal(std::string raw) {
  auto n = make(TermKind::OtherLit);
  n->text = std::move(raw);
  return Term(std::move(n));
}

Term Term::app(Term head, std::vector<Term> args) {
  if (args.empty()) throw Error("application of '" + print_term(head) + "' without arguments");
  auto n = make(TermKind::App);
  n->size = 1 + head.size();
  for (const auto& a : args) n->size += a.size();
  n->children.reserve(args.size() + 1);
  n->children.push_back(std::move(head));
  for (auto& a : args) n->children.push_back(std::move(a));
  return Term(std::move(n));
}

Term Term::app(std::string head, std::vector<Term> args) {
  return app(identifier(std::move(head)), std::move(args));
}

Term Term::quantifier(Quant q, std::vector<SortedVar> vars, Term body) {
  auto n = make(TermKind::Quantifier);
  n->quant = q;
  n->size = 1 + body.size();
  for (const auto& v : vars) n->size += v.sort.size();
  n->vars = std::move(vars);
  n->children.push_back(std::move(body));
  return Term(std::move(n));
}

Term Term::let(std::vector<LetBinding> bindings, Term body) {
  auto n = make(TermKind::Let);
  n->size = 1 + body.size();
  for (const auto& b : bindings) n->size += b.value.size();
  n->bindings = std::move(bindings);
  n->children.push_back(std::move(body));
  return Term(std::move(n));
}

Term Term::annotated(Term body, std::vector<Attr> attrs) {
  auto n = make(TermKind::Annotated);
  n->size = 1 + body.size();
  for (const auto& a : attrs) n->size += attr_size(a);
  n->attrs = std::move(attrs);
  n->children.push_back(std::move(body));
  return Term(std::move(n));
}

TermKind Term::kind() const { return node_->kind; }

bool Term::is_symbol() const {
  return node_->kind == TermKind::Symbol || node_->kind == TermKind::QuotedSymbol;
}

const std::string& Term::text() const { return node_->text; }
const BigInt& Term::int_value() const { return node_->integer; }
bool Term::bool_value() const { return node_->boolean; }

const Term& Term::head() const {
  assert(is_app());
  return node_->children.front();
}

std::span<const Term> Term::args() const {
  if (!is_app()) return {};
  return std::span<const Term>(node_->children).subspan(1);
}

std::string_view Term::head_name() const {
  if (!is_app()) return {};
  const Term& h = head();
  if (!h.is_symbol()) return {};
  return h.text();
}

bool Term::is_app_of(std::string_view name) const { return is_app() && head_name() == name; }

Quant Term::quant() const { return node_->quant; }
std::span<const SortedVar> Term::vars() const { return node_->vars; }
std::span<const LetBinding> Term::bindings() const { return node_->bindings; }

const Term& Term::body() const {
  assert(kind() == TermKind::Quantifier || kind() == TermKind::Let || kind() == TermKind::Annotated);
  return node_->children.front();
}

std::span<const Attr> Term::attrs() const { return node_->attrs; }
std::size_t Term::size() const { return node_->size; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.size != y.size) return false;
  switch (x.kind) {
    case TermKind::Symbol:
    case TermKind::QuotedSymbol:
    case TermKind::StringLit:
    case TermKind::OtherLit:
      return x.text == y.text;
    case TermKind::IntLit:
      return x.integer == y.integer;
    case TermKind::BoolLit:
      return x.boolean == y.boolean;
    case TermKind::App:
      return x.children == y.children;
    case TermKind::Quantifier:
      return x.quant == y.quant && x.vars == y.vars && x.children == y.children;
    case TermKind::Let:
      return x.bindings == y.bindings && x.children == y.children;
    case TermKind::Annotated:
      return x.attrs == y.attrs && x.children == y.children;
  }
  return false;
}

}  // namespace ipm::sexpr
