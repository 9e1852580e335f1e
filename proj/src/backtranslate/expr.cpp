#include "ipm/expr.h"

#include <sstream>

namespace ipm {

std::string_view op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Neq: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
    case BinaryOp::Implies: return "==>";
    case BinaryOp::Iff: return "<==>";
  }
  return "?";
}

std::string_view op_text(UnaryOp op) { return op == UnaryOp::Neg ? "-" : "!"; }

namespace {

std::shared_ptr<Expr> node(Expr::Kind k, SourceSpan span) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->span = span;
  return e;
}

void print(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Var:
      os << e.name;
      return;
    case Expr::Kind::IntConst:
      if (e.value < 0)
        os << "(-" << BigInt(-e.value).str() << ')';
      else
        os << e.value.str();
      return;
    case Expr::Kind::BoolConst:
      os << (e.flag ? "true" : "false");
      return;
    case Expr::Kind::StringConst:
      os << '"';
      for (char c : e.name) {
        if (c == '"' || c == '\\') os << '\\';
        os << c;
      }
      os << '"';
      return;
    case Expr::Kind::Binary:
      os << '(';
      print(os, *e.operands[0]);
      os << ' ' << op_text(e.bop) << ' ';
      print(os, *e.operands[1]);
      os << ')';
      return;
    case Expr::Kind::Unary:
      os << '(' << op_text(e.uop);
      print(os, *e.operands[0]);
      os << ')';
      return;
    case Expr::Kind::Ite:
      os << "(if ";
      print(os, *e.operands[0]);
      os << " then ";
      print(os, *e.operands[1]);
      os << " else ";
      print(os, *e.operands[2]);
      os << ')';
      return;
    case Expr::Kind::Call:
    case Expr::Kind::SeqDisplay: {
      bool call = e.kind == Expr::Kind::Call;
      if (call) os << e.name;
      os << (call ? '(' : '[');
      for (std::size_t i = 0; i < e.operands.size(); ++i) {
        if (i) os << ", ";
        print(os, *e.operands[i]);
      }
      os << (call ? ')' : ']');
      return;
    }
  }
}

}  // namespace

ExprPtr Expr::var(std::string name, SourceSpan span) {
  auto e = node(Kind::Var, span);
  e->name = std::move(name);
  return e;
}

ExprPtr Expr::int_const(BigInt v, SourceSpan span) {
  auto e = node(Kind::IntConst, span);
  e->value = std::move(v);
  return e;
}

ExprPtr Expr::bool_const(bool v, SourceSpan span) {
  auto e = node(Kind::BoolConst, span);
  e->flag = v;
  return e;
}

ExprPtr Expr::string_const(std::string v, SourceSpan span) {
  auto e = node(Kind::StringConst, span);
  e->name = std::move(v);
  return e;
}

ExprPtr Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span) {
  auto e = node(Kind::Binary, span);
  e->bop = op;
  e->operands = {std::move(lhs), std::move(rhs)};
  return e;
}

ExprPtr Expr::unary(UnaryOp op, ExprPtr arg, SourceSpan span) {
  auto e = node(Kind::Unary, span);
  e->uop = op;
  e->operands = {std::move(arg)};
  return e;
}

ExprPtr Expr::ite(ExprPtr c, ExprPtr t, ExprPtr f, SourceSpan span) {
  auto e = node(Kind::Ite, span);
  e->operands = {std::move(c), std::move(t), std::move(f)};
  return e;
}

ExprPtr Expr::call(std::string fn, std::vector<ExprPtr> args, SourceSpan span) {
  auto e = node(Kind::Call, span);
  e->name = std::move(fn);
  e->operands = std::move(args);
  return e;
}

ExprPtr Expr::seq_display(std::vector<ExprPtr> elems, SourceSpan span) {
  auto e = node(Kind::SeqDisplay, span);
  e->operands = std::move(elems);
  return e;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.operands.size() != b.operands.size()) return false;
  switch (a.kind) {
    case Expr::Kind::Var:
    case Expr::Kind::StringConst:
      if (a.name != b.name) return false;
      break;
    case Expr::Kind::IntConst:
      if (a.value != b.value) return false;
      break;
    case Expr::Kind::BoolConst:
      if (a.flag != b.flag) return false;
      break;
    case Expr::Kind::Binary:
      if (a.bop != b.bop) return false;
      break;
    case Expr::Kind::Unary:
      if (a.uop != b.uop) return false;
      break;
    case Expr::Kind::Call:
      if (a.name != b.name) return false;
      break;
    case Expr::Kind::Ite:
    case Expr::Kind::SeqDisplay:
      break;
  }
  for (std::size_t i = 0; i < a.operands.size(); ++i)
    if (!equal(*a.operands[i], *b.operands[i])) return false;
  return true;
}

std::string pretty_print(const Expr& e) {
  std::ostringstream os;
  print(os, e);
  return os.str();
}

void collect_vars(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == Expr::Kind::Var) out.push_back(e.name);
  for (const auto& o : e.operands) collect_vars(*o, out);
}

}  // namespace ipm
