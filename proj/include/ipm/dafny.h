#pragma once

// The supported Dafny subset: lemmas, methods and functions over int, nat,
// bool and strings; requires/ensures; var/assert/assume/if statements.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ipm/backtranslate.h"
#include "ipm/expr.h"
#include "ipm/sexpr.h"

namespace ipm::dafny {

struct Type {
  std::string name;           // int, nat, bool, string, seq, or a type parameter
  std::vector<Type> args;     // seq<T>

  std::string str() const;
  friend bool operator==(const Type&, const Type&) = default;
};

struct Param {
  std::string name;
  Type type;
  friend bool operator==(const Param&, const Param&) = default;
};

struct Clause {
  enum class Kind { Requires, Ensures } kind = Kind::Requires;
  ExprPtr expr;
  std::vector<std::string> attrs;  // attribute names, e.g. "ipm"
  bool has_attr(std::string_view a) const;
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
  enum class Kind { VarDecl, Assert, Assume, If } kind = Kind::Assert;
  std::string name;                   // VarDecl
  std::optional<Type> type;           // VarDecl
  ExprPtr expr;                       // init, assertion, assumption or condition
  std::vector<std::string> attrs;     // Assert
  std::optional<std::vector<StmtPtr>> by;  // Assert ... by { }
  std::vector<StmtPtr> then_body;     // If
  std::optional<std::vector<StmtPtr>> else_body;
  std::size_t line = 0;

  bool has_attr(std::string_view a) const;
};

struct Decl {
  enum class Kind { Lemma, Method, Function } kind = Kind::Lemma;
  std::string name;
  std::vector<std::string> type_params;
  std::vector<Param> params;
  std::optional<Type> result;         // Function
  std::vector<Clause> clauses;        // in source order
  std::vector<StmtPtr> body;          // Lemma, Method
  ExprPtr function_body;              // Function
  bool ghost = false;
  std::size_t line = 0;
};

struct SourceUnit {
  std::string text;
  std::vector<Decl> decls;
};

struct ParseOptions {
  // Accept identifiers starting with '_' (instrumented sources).
  bool allow_reserved = false;
};

SourceUnit parse_program(std::string_view text, const ParseOptions& opts = {});

/// Parses a single expression in the same grammar.
ExprPtr parse_expression(std::string_view text, const ParseOptions& opts = {});

/// The three ghost functions added to every instrumented module.
extern const char* const kGhostFunctions;

struct InstrumentResult {
  std::string text;
  std::size_t targets = 0;
  std::vector<std::string> warnings;
};

InstrumentResult instrument(const SourceUnit& unit);

/// Variables visible at each `{:ipm}` site, innermost binding winning,
/// ordered by first introduction of the name.
std::vector<std::vector<std::string>> ipm_scopes(const SourceUnit& unit);

/// Removes `_protect*` calls and the ghost function declarations.
SourceUnit strip_instrumentation(const SourceUnit& unit);

bool equal(const SourceUnit& a, const SourceUnit& b);

/* -------------------------------------------------------------------------- */
/* Tactic arguments                                                            */
/* -------------------------------------------------------------------------- */

enum class Sort { Int, Bool };

struct ExprContext {
  const bt::NameMap* names = nullptr;
  // Declared SMT constants (by SMT name) usable verbatim, with their sorts.
  std::map<std::string, Sort> symbols;
};

/// Parses a tactic argument into a solver-facing term. Identifiers resolve
/// through the name map; mangled names are accepted when declared.
sexpr::Term parse_expr(std::string_view text, const ExprContext& ctx);

/// Solver-facing translation of an already parsed expression.
sexpr::Term to_smt(const Expr& e, const ExprContext& ctx);

}  // namespace ipm::dafny
