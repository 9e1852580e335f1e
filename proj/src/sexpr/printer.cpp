#include <ostream>
#include <sstream>

#include "ipm/sexpr.h"

namespace ipm::sexpr {

namespace {

void print_string_literal(std::ostream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    if (c == '"') os << '"';
    os << c;
  }
  os << '"';
}

void print_name(std::ostream& os, const std::string& name) {
  if (is_simple_symbol(name))
    os << name;
  else
    os << '|' << name << '|';
}

const char* quant_word(Quant q) {
  switch (q) {
    case Quant::Forall: return "forall";
    case Quant::Exists: return "exists";
    case Quant::Lambda: return "lambda";
  }
  return "forall";
}

}  // namespace

void print_term(std::ostream& os, const Term& t) {
  switch (t.kind()) {
    case TermKind::Symbol:
      os << t.text();
      return;
    case TermKind::QuotedSymbol:
      os << '|' << t.text() << '|';
      return;
    case TermKind::IntLit:
      if (t.int_value() < 0)
        os << "(- " << BigInt(-t.int_value()).str() << ')';
      else
        os << t.int_value().str();
      return;
    case TermKind::BoolLit:
      os << (t.bool_value() ? "true" : "false");
      return;
    case TermKind::StringLit:
      print_string_literal(os, t.text());
      return;
    case TermKind::OtherLit:
      os << t.text();
      return;
    case TermKind::App:
      os << '(';
      print_term(os, t.head());
      for (const auto& a : t.args()) {
        os << ' ';
        print_term(os, a);
      }
      os << ')';
      return;
    case TermKind::Quantifier: {
      os << '(' << quant_word(t.quant()) << " (";
      bool first = true;
      for (const auto& v : t.vars()) {
        if (!first) os << ' ';
        first = false;
        os << '(';
        print_name(os, v.name);
        os << ' ';
        print_term(os, v.sort);
        os << ')';
      }
      os << ") ";
      print_term(os, t.body());
      os << ')';
      return;
    }
    case TermKind::Let: {
      os << "(let (";
      bool first = true;
      for (const auto& b : t.bindings()) {
        if (!first) os << ' ';
        first = false;
        os << '(';
        print_name(os, b.name);
        os << ' ';
        print_term(os, b.value);
        os << ')';
      }
      os << ") ";
      print_term(os, t.body());
      os << ')';
      return;
    }
    case TermKind::Annotated: {
      os << "(! ";
      print_term(os, t.body());
      for (const auto& a : t.attrs()) {
        os << ' ' << a.key;
        if (const auto* v = std::get_if<Term>(&a.value)) {
          os << ' ';
          print_term(os, *v);
        } else if (const auto* l = std::get_if<std::vector<Term>>(&a.value)) {
          os << " (";
          bool first = true;
          for (const auto& p : *l) {
            if (!first) os << ' ';
            first = false;
            print_term(os, p);
          }
          os << ')';
        }
      }
      os << ')';
      return;
    }
  }
}

std::string print_term(const Term& t) {
  std::ostringstream os;
  print_term(os, t);
  return os.str();
}

}  // namespace ipm::sexpr
