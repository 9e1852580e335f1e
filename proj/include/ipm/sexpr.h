#pragma once

// SMT-LIB 2 terms and commands.
//
// Terms are immutable and share structure: copying a Term copies a pointer.
// Equality is structural.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ipm/error.h"

namespace ipm::sexpr {

using BigInt = boost::multiprecision::cpp_int;

struct Position {
  unsigned line = 1;
  unsigned column = 1;
  std::size_t offset = 0;
};

/* -------------------------------------------------------------------------- */
/* Generic s-expressions (reader layer)                                        */
/* -------------------------------------------------------------------------- */

enum class AtomKind : std::uint8_t {
  Symbol,
  QuotedSymbol,
  Numeral,
  Decimal,
  Hexadecimal,
  Binary,
  String,
  Keyword,
};

struct SExpr {
  bool is_list = false;
  AtomKind atom = AtomKind::Symbol;
  // Decoded text: symbol name without bars, string contents without quotes
  // and with "" collapsed.
  std::string text;
  // Token exactly as it appeared in the input (atoms only).
  std::string raw;
  std::vector<SExpr> items;
  Position pos;

  bool is_symbol(std::string_view name) const {
    return !is_list && atom == AtomKind::Symbol && text == name;
  }
};

/// Reads every top-level s-expression in `text`. Comments run from `;` to
/// end of line.
std::vector<SExpr> read_sexprs(std::string_view text);

std::string print_sexpr(const SExpr& e);

/* -------------------------------------------------------------------------- */
/* Terms                                                                       */
/* -------------------------------------------------------------------------- */

enum class TermKind : std::uint8_t {
  Symbol,
  QuotedSymbol,
  IntLit,
  BoolLit,
  StringLit,
  // Decimal, #x and #b literals, kept as written.
  OtherLit,
  App,
  Quantifier,
  Let,
  Annotated,
};

enum class Quant : std::uint8_t { Forall, Exists, Lambda };

class Term;
struct SortedVar;
struct LetBinding;
struct Attr;

class Term {
 public:
  struct Node;

  static Term symbol(std::string name);
  static Term quoted(std::string name);
  /// Symbol or quoted symbol, whichever is needed to print `name` legally.
  static Term identifier(std::string name);
  static Term integer(BigInt value);
  static Term boolean(bool value);
  static Term string(std::string value);
  static Term other_literal(std::string raw);
  static Term app(Term head, std::vector<Term> args);
  static Term app(std::string head, std::vector<Term> args);
  static Term quantifier(Quant q, std::vector<SortedVar> vars, Term body);
  static Term let(std::vector<LetBinding> bindings, Term body);
  static Term annotated(Term body, std::vector<Attr> attrs);

  TermKind kind() const;
  bool is_symbol() const;  // Symbol or QuotedSymbol
  bool is_app() const { return kind() == TermKind::App; }

  /// Symbol/quoted symbol name, string contents, or raw literal text.
  const std::string& text() const;
  const BigInt& int_value() const;
  bool bool_value() const;

  const Term& head() const;
  std::span<const Term> args() const;
  const Term& arg(std::size_t i) const { return args()[i]; }
  /// Name of the head symbol of an application; empty when the head is not
  /// a symbol or this is not an application.
  std::string_view head_name() const;
  bool is_app_of(std::string_view name) const;

  Quant quant() const;
  std::span<const SortedVar> vars() const;
  std::span<const LetBinding> bindings() const;
  const Term& body() const;
  std::span<const Attr> attrs() const;

  /// Number of nodes in the tree (shared subterms counted every time).
  std::size_t size() const;

  bool same_node(const Term& other) const { return node_ == other.node_; }
  /// Identity of the shared node, for memo tables.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct SortedVar {
  std::string name;
  Term sort;
  friend bool operator==(const SortedVar&, const SortedVar&) = default;
};

struct LetBinding {
  std::string name;
  Term value;
  friend bool operator==(const LetBinding&, const LetBinding&) = default;
};

using AttrValue = std::variant<std::monostate, Term, std::vector<Term>>;

/// Attribute inside `(! t :key value)`. `:pattern` values are term lists.
struct Attr {
  std::string key;  // includes the leading ':'
  AttrValue value;
  friend bool operator==(const Attr&, const Attr&) = default;
};

struct Term::Node {
  TermKind kind = TermKind::Symbol;
  std::string text;
  BigInt integer;
  bool boolean = false;
  Quant quant = Quant::Forall;
  std::vector<Term> children;  // App: head then args; otherwise the body
  std::vector<SortedVar> vars;
  std::vector<LetBinding> bindings;
  std::vector<Attr> attrs;
  std::size_t size = 1;
};

/// True when `name` can be printed without `|...|`.
bool is_simple_symbol(std::string_view name);

std::string print_term(const Term& t);
void print_term(std::ostream& os, const Term& t);

Term to_term(const SExpr& e);

/// Parses exactly one term.
Term parse_term(std::string_view text);

/* -------------------------------------------------------------------------- */
/* Commands                                                                    */
/* -------------------------------------------------------------------------- */

enum class CommandKind : std::uint8_t {
  SetOption,
  DeclareFun,
  DeclareSort,
  DefineFun,
  Assert,
  Push,
  Pop,
  CheckSat,
  Other,
};

struct Command {
  CommandKind kind = CommandKind::Other;
  // Option key (":smt.mbqi") for SetOption; declared symbol for declarations;
  // command word for Other.
  std::string name;
  // Printed option value for SetOption.
  std::string value;
  std::optional<Term> term;  // Assert body
  unsigned count = 0;        // Push/Pop level count
  SExpr raw;
  // Index in the originating script.
  std::size_t index = 0;

  Position pos() const { return raw.pos; }
};

std::vector<Command> parse_script(std::string_view text);
Command to_command(const SExpr& e);
std::string print_command(const Command& c);

}  // namespace ipm::sexpr
