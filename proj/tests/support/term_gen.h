#pragma once

// Random SMT-LIB terms covering every Term variant.

#include <random>
#include <string>
#include <vector>

#include "ipm/sexpr.h"

namespace ipm::testing {

class TermGen {
 public:
  explicit TermGen(unsigned seed) : rng_(seed) {}

  sexpr::Term term(int depth) {
    using sexpr::Term;
    int pick = depth <= 0 ? pick_int(0, 4) : pick_int(0, 11);
    switch (pick) {
      case 0: return Term::symbol(simple_name());
      case 1: return Term::quoted(quoted_name());
      case 2: return Term::integer(big_int());
      case 3: return Term::boolean(pick_int(0, 1) == 1);
      case 4: return Term::string(string_value());
      case 5:
      case 6:
      case 7: {
        std::vector<Term> args;
        int n = pick_int(1, 4);
        for (int i = 0; i < n; ++i) args.push_back(term(depth - 1));
        return app(simple_name(), std::move(args));
      }
      case 8: {
        std::vector<sexpr::SortedVar> vars;
        int n = pick_int(1, 3);
        for (int i = 0; i < n; ++i) vars.push_back({binder_name(), sort()});
        auto q = static_cast<sexpr::Quant>(pick_int(0, 2));
        return Term::quantifier(q, std::move(vars), term(depth - 1));
      }
      case 9: {
        std::vector<sexpr::LetBinding> bs;
        int n = pick_int(1, 3);
        for (int i = 0; i < n; ++i) bs.push_back({binder_name(), term(depth - 1)});
        return Term::let(std::move(bs), term(depth - 1));
      }
      case 10: {
        std::vector<sexpr::Attr> attrs;
        attrs.push_back({":qid", Term::quoted("file.bpl." + std::to_string(pick_int(1, 999)) + ":15")});
        if (pick_int(0, 1)) {
          std::vector<Term> pats;
          int n = pick_int(1, 2);
          for (int i = 0; i < n; ++i) pats.push_back(app(simple_name(), {term(0)}));
          attrs.push_back({":pattern", std::move(pats)});
        }
        if (pick_int(0, 1)) attrs.push_back({":weight", Term::integer(pick_int(0, 9))});
        return Term::annotated(term(depth - 1), std::move(attrs));
      }
      default:
        return Term::other_literal(pick_int(0, 1) ? "#x1F" : "2.50");
    }
  }

 private:
  std::mt19937 rng_;

  static sexpr::Term app(std::string head, std::vector<sexpr::Term> args) {
    // `(- n)` with a numeral is read back as a negative literal.
    if (head == "-" && args.size() == 1 && args[0].kind() == sexpr::TermKind::IntLit) head = "Sub";
    return sexpr::Term::app(head, std::move(args));
  }

  int pick_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string simple_name() {
    static const char* names[] = {"Mod", "Mul", "LitInt", "+", "-", "=", "=>", "and", "not", "ControlFlow",
                                  "$IsGoodHeap", "$Box_577", "Seq#Build", "char#FromInt", "a", "b", "Sub"};
    return names[pick_int(0, std::size(names) - 1)];
  }

  std::string quoted_name() {
    static const char* names[] = {"x#0@@1", "y#0", "Set#IsMember", "lambda#0", "with space", "a(b)", "", "12x"};
    return names[pick_int(0, std::size(names) - 1)];
  }

  std::string binder_name() {
    static const char* names[] = {"o@@5", "x", "anon0_correct", "q#1", "v w"};
    return names[pick_int(0, std::size(names) - 1)];
  }

  sexpr::Term sort() {
    using sexpr::Term;
    switch (pick_int(0, 2)) {
      case 0: return Term::symbol("Int");
      case 1: return Term::symbol("Bool");
      default: return Term::app("Array", {Term::symbol("Int"), Term::symbol("Bool")});
    }
  }

  sexpr::BigInt big_int() {
    sexpr::BigInt v = pick_int(0, 1000);
    if (pick_int(0, 3) == 0) v = v * sexpr::BigInt("123456789012345678901234567890");
    if (pick_int(0, 2) == 0) v = -v;
    return v;
  }

  std::string string_value() {
    static const char* values[] = {"", "x", "x + y > 0", "say \"hi\"", "back\\slash"};
    return values[pick_int(0, std::size(values) - 1)];
  }
};

}  // namespace ipm::testing
