#include <cctype>
#include <set>

#include "ipm/dafny.h"

namespace ipm::dafny {

namespace {

enum class Tok { Ident, Number, String, Punct, Eof };

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

const std::set<std::string> kUnsupported = {
    "while", "for", "class", "trait", "datatype", "codatatype", "array", "forall", "exists", "returns",
    "modifies", "reads", "decreases", "invariant", "new", "match", "calc", "module", "import", "iterator",
    "constructor", "twostate", "old", "fresh", "return", "break", "label", "yield", "set", "map", "multiset",
    "predicate", "const", "type", "newtype", "static", "include", "reveal", "opaque", "print", "expect"};

// Punctuation, longest first.
const char* const kPuncts[] = {"<==>", "==>", ":=", "&&", "||", "==", "!=", "<=", ">=", "{:", "<", ">", "+", "-",
                               "*",    "/",   "%",  "!",  "(",  ")",  "{",  "}",  "[",  "]",  ",", ":", ";"};

class Lexer {
 public:
  Lexer(std::string_view text, bool tactic_names) : text_(text), tactic_names_(tactic_names) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.begin = pos_;
      t.line = line_;
      t.column = pos_ - line_start_ + 1;
      if (pos_ >= text_.size()) {
        t.end = pos_;
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || (tactic_names_ && (c == '$' || c == '#'))) {
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        t.kind = Tok::Ident;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && ident_char(text_[pos_])) error(t, "malformed number");
        t.kind = Tok::Number;
      } else if (c == '"') {
        t.kind = Tok::String;
        ++pos_;
        std::string value;
        for (;;) {
          if (pos_ >= text_.size() || text_[pos_] == '\n') error(t, "unterminated string literal");
          char d = text_[pos_++];
          if (d == '"') break;
          if (d == '\\') {
            if (pos_ >= text_.size()) error(t, "unterminated string literal");
            char e = text_[pos_++];
            switch (e) {
              case 'n': value += '\n'; break;
              case 't': value += '\t'; break;
              case 'r': value += '\r'; break;
              case '0': value += '\0'; break;
              case '\\': case '"': case '\'': value += e; break;
              default: error(t, std::string("unsupported escape \\") + e);
            }
            continue;
          }
          value += d;
        }
        t.text = value;
        t.end = pos_;
        out.push_back(t);
        continue;
      } else {
        bool matched = false;
        for (const char* p : kPuncts) {
          std::string_view pv(p);
          if (text_.substr(pos_, pv.size()) == pv) {
            pos_ += pv.size();
            matched = true;
            break;
          }
        }
        if (!matched) error(t, std::string("unexpected character '") + c + "'");
        t.kind = Tok::Punct;
      }
      t.end = pos_;
      t.text = std::string(text_.substr(t.begin, t.end - t.begin));
      out.push_back(t);
    }
  }

 private:
  std::string_view text_;
  bool tactic_names_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;

  bool ident_char(char c) const {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '?' ||
           (tactic_names_ && (c == '#' || c == '@' || c == '$' || c == '.'));
  }

  [[noreturn]] void error(const Token& t, const std::string& msg) { throw ParseError(msg, t.line, t.column); }

  void newline() {
    ++line_;
    line_start_ = pos_ + 1;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        newline();
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (text_.substr(pos_, 2) == "//") {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (text_.substr(pos_, 2) == "/*") {
        Token t;
        t.line = line_;
        t.column = pos_ - line_start_ + 1;
        pos_ += 2;
        while (pos_ < text_.size() && text_.substr(pos_, 2) != "*/") {
          if (text_[pos_] == '\n') newline();
          ++pos_;
        }
        if (pos_ >= text_.size()) error(t, "unterminated comment");
        pos_ += 2;
      } else {
        return;
      }
    }
  }
};

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& opts, bool tactic)
      : text_(text), opts_(opts), toks_(Lexer(text, tactic).run()) {}

  SourceUnit program() {
    SourceUnit unit;
    unit.text = std::string(text_);
    while (!at_eof()) unit.decls.push_back(decl());
    return unit;
  }

  ExprPtr lone_expression() {
    ExprPtr e = expr();
    if (!at_eof()) error(peek(), "unexpected '" + peek().text + "' after expression");
    return e;
  }

 private:
  std::string_view text_;
  ParseOptions opts_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  bool at_eof() const { return peek().kind == Tok::Eof; }
  const Token& next() {
    const Token& t = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }
  std::size_t last_end() const { return i_ == 0 ? 0 : toks_[i_ - 1].end; }

  [[noreturn]] void error(const Token& t, const std::string& msg) const {
    throw ParseError(msg, t.line, t.column);
  }

  bool is_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool is_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }

  bool accept(std::string_view p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!is_word(w)) return false;
    next();
    return true;
  }

  void expect(std::string_view p) {
    if (!accept(p)) {
      std::string got = at_eof() ? "end of input" : "'" + peek().text + "'";
      error(peek(), "expected '" + std::string(p) + "' but found " + got);
    }
  }

  void check_supported(const Token& t) const {
    if (t.kind == Tok::Ident && kUnsupported.contains(t.text))
      error(t, "unsupported construct '" + t.text + "'");
  }

  std::string ident(const char* what) {
    const Token& t = peek();
    check_supported(t);
    if (t.kind != Tok::Ident) error(t, std::string("expected ") + what);
    if (!opts_.allow_reserved && t.text.front() == '_')
      error(t, "identifier '" + t.text + "' is reserved: names may not start with '_'");
    return next().text;
  }

  std::vector<std::string> attributes() {
    std::vector<std::string> out;
    while (is_punct("{:")) {
      next();
      out.push_back(ident("attribute name"));
      expect("}");
    }
    return out;
  }

  Type type() {
    Type t;
    if (is_word("array") || peek().text.starts_with("array")) error(peek(), "unsupported construct 'array'");
    t.name = ident("a type");
    if (accept("<")) {
      t.args.push_back(type());
      while (accept(",")) t.args.push_back(type());
      expect(">");
    }
    return t;
  }

  Decl decl() {
    Decl d;
    d.line = peek().line;
    if (accept_word("ghost")) d.ghost = true;
    const Token& kw = peek();
    check_supported(kw);
    if (accept_word("lemma")) {
      d.kind = Decl::Kind::Lemma;
    } else if (accept_word("method")) {
      d.kind = Decl::Kind::Method;
    } else if (accept_word("function")) {
      d.kind = Decl::Kind::Function;
    } else {
      error(kw, "expected 'lemma', 'method' or 'function'");
    }
    attributes();
    d.name = ident("a declaration name");
    if (accept("<")) {
      d.type_params.push_back(ident("a type parameter"));
      while (accept(",")) d.type_params.push_back(ident("a type parameter"));
      expect(">");
    }
    expect("(");
    std::set<std::string> seen;
    if (!is_punct(")")) {
      do {
        const Token& at = peek();
        accept_word("ghost");
        Param p;
        p.name = ident("a parameter name");
        expect(":");
        p.type = type();
        if (!seen.insert(p.name).second) error(at, "duplicate parameter '" + p.name + "'");
        d.params.push_back(std::move(p));
      } while (accept(","));
    }
    expect(")");
    if (d.kind == Decl::Kind::Function) {
      expect(":");
      d.result = type();
    }
    check_supported(peek());
    for (;;) {
      check_supported(peek());
      Clause c;
      if (accept_word("requires")) {
        c.kind = Clause::Kind::Requires;
      } else if (accept_word("ensures")) {
        c.kind = Clause::Kind::Ensures;
      } else {
        break;
      }
      const Token& at = peek();
      c.attrs = attributes();
      if (c.kind == Clause::Kind::Requires && !c.attrs.empty())
        error(at, "attributes are only supported on ensures clauses and assertions");
      c.expr = expr();
      d.clauses.push_back(std::move(c));
    }
    if (d.kind == Decl::Kind::Function) {
      expect("{");
      d.function_body = expr();
      expect("}");
    } else {
      d.body = block();
    }
    return d;
  }

  std::vector<StmtPtr> block() {
    expect("{");
    std::vector<StmtPtr> out;
    while (!is_punct("}")) {
      if (at_eof()) error(peek(), "expected '}' but found end of input");
      out.push_back(stmt());
    }
    next();
    return out;
  }

  StmtPtr stmt() {
    auto s = std::make_shared<Stmt>();
    const Token& at = peek();
    s->line = at.line;
    check_supported(at);
    if (accept_word("var")) {
      s->kind = Stmt::Kind::VarDecl;
      s->name = ident("a variable name");
      if (accept(":")) s->type = type();
      if (is_punct(",")) error(peek(), "multiple variables in one declaration are not supported");
      expect(":=");
      s->expr = expr();
      expect(";");
    } else if (accept_word("assert")) {
      s->kind = Stmt::Kind::Assert;
      s->attrs = attributes();
      s->expr = expr();
      if (accept_word("by"))
        s->by = block();
      else
        expect(";");
    } else if (accept_word("assume")) {
      s->kind = Stmt::Kind::Assume;
      const Token& a = peek();
      if (!attributes().empty()) error(a, "attributes are only supported on ensures clauses and assertions");
      s->expr = expr();
      expect(";");
    } else if (accept_word("if")) {
      s->kind = Stmt::Kind::If;
      s->expr = expr();
      s->then_body = block();
      if (accept_word("else")) {
        if (is_word("if"))
          s->else_body = std::vector<StmtPtr>{stmt()};
        else
          s->else_body = block();
      }
    } else if (at.kind == Tok::Ident) {
      error(at, "unsupported statement starting with '" + at.text + "'");
    } else {
      error(at, "expected a statement but found '" + at.text + "'");
    }
    return s;
  }

  /* -------------------------- expressions -------------------------- */

  SourceSpan span_from(std::size_t begin) const { return {begin, last_end()}; }

  template <class F>
  ExprPtr bin(BinaryOp op, ExprPtr lhs, F rhs, std::size_t begin) {
    ExprPtr r = rhs();
    return Expr::binary(op, std::move(lhs), std::move(r), span_from(begin));
  }

  ExprPtr expr() { return iff(); }

  ExprPtr iff() {
    std::size_t b = peek().begin;
    ExprPtr lhs = implies();
    while (accept("<==>")) lhs = bin(BinaryOp::Iff, lhs, [&] { return implies(); }, b);
    return lhs;
  }

  ExprPtr implies() {
    std::size_t b = peek().begin;
    ExprPtr lhs = disjunction();
    if (accept("==>")) return bin(BinaryOp::Implies, lhs, [&] { return implies(); }, b);
    return lhs;
  }

  ExprPtr disjunction() {
    std::size_t b = peek().begin;
    ExprPtr lhs = conjunction();
    while (accept("||")) lhs = bin(BinaryOp::Or, lhs, [&] { return conjunction(); }, b);
    return lhs;
  }

  ExprPtr conjunction() {
    std::size_t b = peek().begin;
    ExprPtr lhs = comparison();
    while (accept("&&")) lhs = bin(BinaryOp::And, lhs, [&] { return comparison(); }, b);
    return lhs;
  }

  std::optional<BinaryOp> comparison_op() const {
    if (peek().kind != Tok::Punct) return std::nullopt;
    const std::string& t = peek().text;
    if (t == "==") return BinaryOp::Eq;
    if (t == "!=") return BinaryOp::Neq;
    if (t == "<") return BinaryOp::Lt;
    if (t == "<=") return BinaryOp::Le;
    if (t == ">") return BinaryOp::Gt;
    if (t == ">=") return BinaryOp::Ge;
    return std::nullopt;
  }

  ExprPtr comparison() {
    std::size_t b = peek().begin;
    ExprPtr lhs = additive();
    if (auto op = comparison_op()) {
      next();
      lhs = bin(*op, lhs, [&] { return additive(); }, b);
      if (comparison_op()) error(peek(), "comparison operators do not chain; add parentheses");
    }
    return lhs;
  }

  ExprPtr additive() {
    std::size_t b = peek().begin;
    ExprPtr lhs = multiplicative();
    for (;;) {
      if (accept("+")) lhs = bin(BinaryOp::Add, lhs, [&] { return multiplicative(); }, b);
      else if (accept("-")) lhs = bin(BinaryOp::Sub, lhs, [&] { return multiplicative(); }, b);
      else
        return lhs;
    }
  }

  ExprPtr multiplicative() {
    std::size_t b = peek().begin;
    ExprPtr lhs = unary();
    for (;;) {
      if (accept("*")) lhs = bin(BinaryOp::Mul, lhs, [&] { return unary(); }, b);
      else if (accept("/")) lhs = bin(BinaryOp::Div, lhs, [&] { return unary(); }, b);
      else if (accept("%")) lhs = bin(BinaryOp::Mod, lhs, [&] { return unary(); }, b);
      else
        return lhs;
    }
  }

  ExprPtr unary() {
    std::size_t b = peek().begin;
    if (accept("-")) { ExprPtr arg = unary(); return Expr::unary(UnaryOp::Neg, arg, span_from(b)); }
    if (accept("!")) { ExprPtr arg = unary(); return Expr::unary(UnaryOp::Not, arg, span_from(b)); }
    return primary();
  }

  ExprPtr primary() {
    const Token& t = peek();
    std::size_t b = t.begin;
    check_supported(t);
    switch (t.kind) {
      case Tok::Number:
        next();
        return Expr::int_const(BigInt(t.text), span_from(b));
      case Tok::String:
        next();
        return Expr::string_const(t.text, span_from(b));
      case Tok::Ident: {
        if (t.text == "true" || t.text == "false") {
          next();
          return Expr::bool_const(t.text == "true", span_from(b));
        }
        if (t.text == "if") {
          next();
          ExprPtr c = expr();
          if (!accept_word("then")) error(peek(), "expected 'then'");
          ExprPtr th = expr();
          if (!accept_word("else")) error(peek(), "expected 'else'");
          ExprPtr el = expr();
          return Expr::ite(c, th, el, span_from(b));
        }
        std::string name = ident("an expression");
        if (accept("(")) {
          std::vector<ExprPtr> args;
          if (!is_punct(")")) {
            args.push_back(expr());
            while (accept(",")) args.push_back(expr());
          }
          expect(")");
          return Expr::call(name, std::move(args), span_from(b));
        }
        return Expr::var(name, span_from(b));
      }
      case Tok::Punct:
        if (accept("(")) {
          ExprPtr e = expr();
          expect(")");
          // The span covers the parentheses so source splicing stays exact.
          auto copy = std::make_shared<Expr>(*e);
          copy->span = span_from(b);
          return copy;
        }
        if (accept("[")) {
          std::vector<ExprPtr> elems;
          if (!is_punct("]")) {
            elems.push_back(expr());
            while (accept(",")) elems.push_back(expr());
          }
          expect("]");
          return Expr::seq_display(std::move(elems), span_from(b));
        }
        error(t, "expected an expression but found '" + t.text + "'");
      case Tok::Eof:
        error(t, "expected an expression but found end of input");
    }
    error(t, "expected an expression");
  }
};

}  // namespace

std::string Type::str() const {
  std::string s = name;
  if (!args.empty()) {
    s += '<';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) s += ", ";
      s += args[i].str();
    }
    s += '>';
  }
  return s;
}

bool Clause::has_attr(std::string_view a) const {
  for (const auto& x : attrs)
    if (x == a) return true;
  return false;
}

bool Stmt::has_attr(std::string_view a) const {
  for (const auto& x : attrs)
    if (x == a) return true;
  return false;
}

SourceUnit parse_program(std::string_view text, const ParseOptions& opts) {
  return Parser(text, opts, false).program();
}

ExprPtr parse_expression(std::string_view text, const ParseOptions& opts) {
  return Parser(text, opts, false).lone_expression();
}

namespace detail {
ExprPtr parse_tactic_expression(std::string_view text) {
  ParseOptions opts;
  return Parser(text, opts, true).lone_expression();
}
}  // namespace detail

}  // namespace ipm::dafny
