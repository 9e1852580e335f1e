#pragma once

// Dafny-level expressions. Used both for parsed source and for the display
// form of back-translated SMT terms.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ipm {

using BigInt = boost::multiprecision::cpp_int;

enum class BinaryOp : std::uint8_t {
  Add, Sub, Mul, Div, Mod,
  Eq, Neq, Lt, Le, Gt, Ge,
  And, Or, Implies, Iff,
};

enum class UnaryOp : std::uint8_t { Neg, Not };

std::string_view op_text(BinaryOp op);
std::string_view op_text(UnaryOp op);

/// Half-open byte range into the source text an expression was parsed from.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind : std::uint8_t {
    Var,
    IntConst,
    BoolConst,
    StringConst,
    Binary,
    Unary,
    Ite,
    Call,
    SeqDisplay,
  };

  Kind kind = Kind::Var;
  std::string name;  // Var, Call; contents for StringConst
  BigInt value;      // IntConst
  bool flag = false; // BoolConst
  BinaryOp bop = BinaryOp::Add;
  UnaryOp uop = UnaryOp::Neg;
  std::vector<ExprPtr> operands;  // Binary: lhs rhs; Unary: arg; Ite: c t e; Call/SeqDisplay: args
  SourceSpan span;

  static ExprPtr var(std::string name, SourceSpan span = {});
  static ExprPtr int_const(BigInt v, SourceSpan span = {});
  static ExprPtr bool_const(bool v, SourceSpan span = {});
  static ExprPtr string_const(std::string v, SourceSpan span = {});
  static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span = {});
  static ExprPtr unary(UnaryOp op, ExprPtr arg, SourceSpan span = {});
  static ExprPtr ite(ExprPtr c, ExprPtr t, ExprPtr e, SourceSpan span = {});
  static ExprPtr call(std::string fn, std::vector<ExprPtr> args, SourceSpan span = {});
  static ExprPtr seq_display(std::vector<ExprPtr> elems, SourceSpan span = {});
};

/// Structural equality, ignoring source spans.
bool equal(const Expr& a, const Expr& b);
inline bool equal(const ExprPtr& a, const ExprPtr& b) { return equal(*a, *b); }

/// Fully parenthesized rendering: every binary, unary and conditional node
/// is wrapped in its own parentheses.
std::string pretty_print(const Expr& e);
inline std::string pretty_print(const ExprPtr& e) { return pretty_print(*e); }

/// Collects the names of all variables occurring in `e`.
void collect_vars(const Expr& e, std::vector<std::string>& out);

}  // namespace ipm
