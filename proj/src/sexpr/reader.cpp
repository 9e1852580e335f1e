#include <cctype>
#include <sstream>

#include "ipm/sexpr.h"

namespace ipm::sexpr {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    // Explicit stack: deeply nested VCs must not exhaust the call stack.
    std::vector<SExpr> stack;
    for (;;) {
      skip_layout();
      if (at_end()) break;
      char c = peek();
      if (c == '(') {
        SExpr list;
        list.is_list = true;
        list.pos = pos_;
        advance();
        stack.push_back(std::move(list));
        continue;
      }
      if (c == ')') {
        if (stack.empty()) fail("unbalanced ')'", pos_);
        advance();
        SExpr done = std::move(stack.back());
        stack.pop_back();
        emit(std::move(done), stack, out);
        continue;
      }
      emit(read_atom(), stack, out);
    }
    if (!stack.empty()) fail("unbalanced '(': missing ')'", stack.back().pos);
    return out;
  }

 private:
  static void emit(SExpr e, std::vector<SExpr>& stack, std::vector<SExpr>& out) {
    if (stack.empty())
      out.push_back(std::move(e));
    else
      stack.back().items.push_back(std::move(e));
  }

  [[noreturn]] static void fail(const std::string& msg, Position p) {
    throw ParseError(msg, p.line, p.column);
  }

  bool at_end() const { return pos_.offset >= text_.size(); }
  char peek() const { return text_[pos_.offset]; }

  void advance() {
    if (text_[pos_.offset] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++pos_.offset;
  }

  void skip_layout() {
    while (!at_end()) {
      char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  static bool is_delimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';' ||
           c == '"' || c == '|';
  }

  SExpr read_atom() {
    SExpr e;
    e.pos = pos_;
    std::size_t start = pos_.offset;
    char c = peek();
    if (c == '|') {
      advance();
      while (!at_end() && peek() != '|') {
        if (peek() == '\\') fail("backslash inside quoted symbol", pos_);
        advance();
      }
      if (at_end()) fail("unterminated quoted symbol", e.pos);
      advance();
      e.atom = AtomKind::QuotedSymbol;
      e.raw = std::string(text_.substr(start, pos_.offset - start));
      e.text = e.raw.substr(1, e.raw.size() - 2);
      return e;
    }
    if (c == '"') {
      advance();
      std::string decoded;
      for (;;) {
        if (at_end()) fail("unterminated string literal", e.pos);
        char d = peek();
        advance();
        if (d == '"') {
          if (!at_end() && peek() == '"') {
            decoded.push_back('"');
            advance();
            continue;
          }
          break;
        }
        decoded.push_back(d);
      }
      e.atom = AtomKind::String;
      e.raw = std::string(text_.substr(start, pos_.offset - start));
      e.text = std::move(decoded);
      return e;
    }
    while (!at_end() && !is_delimiter(peek())) advance();
    e.raw = std::string(text_.substr(start, pos_.offset - start));
    e.text = e.raw;
    e.atom = classify(e.raw);
    if (e.atom == AtomKind::Keyword && e.raw.size() == 1) fail("empty keyword", e.pos);
    return e;
  }

  static AtomKind classify(const std::string& tok) {
    auto all = [](std::string_view s, auto pred) {
      if (s.empty()) return false;
      for (char c : s)
        if (!pred(c)) return false;
      return true;
    };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (tok.front() == ':') return AtomKind::Keyword;
    if (tok.size() > 2 && tok[0] == '#' && tok[1] == 'x' &&
        all(std::string_view(tok).substr(2), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }))
      return AtomKind::Hexadecimal;
    if (tok.size() > 2 && tok[0] == '#' && tok[1] == 'b' &&
        all(std::string_view(tok).substr(2), [](char c) { return c == '0' || c == '1'; }))
      return AtomKind::Binary;
    std::string_view body = tok;
    if (body.size() > 1 && body.front() == '-') body.remove_prefix(1);
    if (all(body, digit)) return AtomKind::Numeral;
    auto dot = body.find('.');
    if (dot != std::string_view::npos && tok.front() != '-' && all(body.substr(0, dot), digit) &&
        all(body.substr(dot + 1), digit))
      return AtomKind::Decimal;
    return AtomKind::Symbol;
  }

  std::string_view text_;
  Position pos_;
};

void print_sexpr_to(std::ostream& os, const SExpr& e) {
  if (!e.is_list) {
    os << e.raw;
    return;
  }
  os << '(';
  bool first = true;
  for (const auto& item : e.items) {
    if (!first) os << ' ';
    first = false;
    print_sexpr_to(os, item);
  }
  os << ')';
}

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) { return Reader(text).read_all(); }

std::string print_sexpr(const SExpr& e) {
  std::ostringstream os;
  print_sexpr_to(os, e);
  return os.str();
}

}  // namespace ipm::sexpr
