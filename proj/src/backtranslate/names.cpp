#include <algorithm>
#include <unordered_set>

#include "ipm/backtranslate.h"

namespace ipm::bt {

using sexpr::TermKind;

void NameMap::add(const std::string& dafny, const std::string& smt, bool in_scope) {
  for (auto& e : entries_) {
    if (e.smt_name != smt) continue;
    if (e.dafny_name != dafny)
      throw Error("SMT identifier '" + smt + "' is claimed by both '" + e.dafny_name + "' and '" + dafny + "'");
    if (in_scope && !e.in_scope) {
      for (const auto& other : entries_)
        if (other.dafny_name == dafny && other.in_scope && other.smt_name != smt)
          throw Error("'" + dafny + "' has two in-scope SMT identifiers: '" + other.smt_name + "' and '" + smt + "'");
      e.in_scope = true;
    }
    return;
  }
  if (in_scope)
    for (const auto& other : entries_)
      if (other.dafny_name == dafny && other.in_scope)
        throw Error("'" + dafny + "' has two in-scope SMT identifiers: '" + other.smt_name + "' and '" + smt + "'");
  entries_.push_back({dafny, smt, in_scope});
}

std::optional<std::string> NameMap::dafny_name(std::string_view smt) const {
  for (const auto& e : entries_)
    if (e.smt_name == smt) return e.dafny_name;
  return std::nullopt;
}

std::optional<std::string> NameMap::smt_name(std::string_view dafny) const {
  const NameEntry* only = nullptr;
  std::size_t count = 0;
  for (const auto& e : entries_) {
    if (e.dafny_name != dafny) continue;
    if (e.in_scope) return e.smt_name;
    only = &e;
    ++count;
  }
  if (count == 1) return only->smt_name;
  return std::nullopt;
}

std::vector<std::string> NameMap::smt_names(std::string_view dafny) const {
  std::vector<std::string> out;
  for (const auto& e : entries_)
    if (e.dafny_name == dafny) out.push_back(e.smt_name);
  return out;
}

std::vector<std::string> NameMap::dafny_names() const {
  std::vector<std::string> out;
  for (const auto& e : entries_)
    if (std::find(out.begin(), out.end(), e.dafny_name) == out.end()) out.push_back(e.dafny_name);
  return out;
}

std::string NameMap::display_name(std::string_view smt) const {
  auto d = dafny_name(smt);
  if (!d) return std::string(smt);
  auto forward = smt_name(*d);
  if (forward && *forward == smt) return *d;
  return std::string(smt);
}

/* -------------------------------------------------------------------------- */

namespace {

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }
bool ends_with(std::string_view s, std::string_view p) {
  return s.size() >= p.size() && s.substr(s.size() - p.size()) == p;
}

// Looks through box/unbox/literal wrappers.
const Term& unwrap(const Term& t) {
  const Term* cur = &t;
  while (cur->is_app() && cur->args().size() == 1) {
    auto h = cur->head_name();
    if (!(is_box_head(h) || is_unbox_head(h) || is_lit_head(h))) break;
    cur = &cur->arg(0);
  }
  return *cur;
}

std::string utf8(unsigned long code) {
  std::string out;
  if (code < 0x80) {
    out.push_back(static_cast<char>(code));
  } else if (code < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (code >> 6)));
    out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
  } else if (code < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (code >> 12)));
    out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (code >> 18)));
    out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
  }
  return out;
}

// Payload and name arguments of a protection application.
struct ProtectionArgs {
  const Term* payload;
  const Term* name;
};

ProtectionArgs protection_args(const Term& app, ProtectionKind kind) {
  auto args = app.args();
  std::size_t trailing = kind == ProtectionKind::ToProve ? 3 : 2;
  std::size_t expected = trailing + 2;  // type argument and reveal/fuel flag
  if (args.size() != expected && args.size() != trailing)
    throw Error("protection call '" + std::string(app.head_name()) + "' has " + std::to_string(args.size()) +
                " arguments, expected " + std::to_string(expected));
  std::size_t base = args.size() - trailing;
  return {&args[base], &args[base + 1]};
}

class NameCollector {
 public:
  explicit NameCollector(NameMap& names) : names_(names) {}

  void visit(const Term& t) {
    if (!seen_.insert(t.id()).second) return;
    switch (t.kind()) {
      case TermKind::App: {
        if (auto kind = protection_kind(t)) {
          auto pa = protection_args(t, *kind);
          if (*kind != ProtectionKind::ToProve) {
            const Term& v = unwrap(*pa.payload);
            if (v.is_symbol()) names_.add(decode_string_literal(*pa.name), v.text(), *kind == ProtectionKind::Scope);
          }
        }
        visit(t.head());
        for (const auto& a : t.args()) visit(a);
        return;
      }
      case TermKind::Let:
        for (const auto& b : t.bindings()) visit(b.value);
        visit(t.body());
        return;
      case TermKind::Quantifier:
      case TermKind::Annotated:
        visit(t.body());
        return;
      default:
        return;
    }
  }

 private:
  NameMap& names_;
  std::unordered_set<const void*> seen_;
};

}  // namespace

bool is_box_head(std::string_view h) { return starts_with(h, "$Box") || ends_with(h, "_2_U"); }
bool is_unbox_head(std::string_view h) { return starts_with(h, "$Unbox") || starts_with(h, "U_2_"); }
bool is_lit_head(std::string_view h) { return h == "Lit" || h == "LitInt" || starts_with(h, "Lit_"); }

std::optional<ProtectionKind> protection_kind(const Term& t) {
  if (!t.is_app()) return std::nullopt;
  auto h = t.head_name();
  if (ends_with(h, "__protect")) return ProtectionKind::Protect;
  if (ends_with(h, "__protectScope")) return ProtectionKind::Scope;
  if (ends_with(h, "__protectToProve")) return ProtectionKind::ToProve;
  return std::nullopt;
}

std::string decode_string_literal(const Term& t) {
  const Term& s = unwrap(t);
  if (s.kind() == TermKind::StringLit) return s.text();
  if (s.is_symbol() && s.text() == "Seq#Empty") return {};
  if (s.is_app_of("Seq#Build") && s.args().size() == 2) {
    std::string prefix = decode_string_literal(s.arg(0));
    const Term& ch = unwrap(s.arg(1));
    if (!ch.is_app_of("char#FromInt") || ch.args().size() != 1)
      throw Error("string element is not a character: " + sexpr::print_term(ch));
    const Term& code = unwrap(ch.arg(0));
    if (code.kind() != TermKind::IntLit) throw Error("non-literal character code: " + sexpr::print_term(code));
    if (code.int_value() < 0 || code.int_value() > 0x10FFFF)
      throw Error("character code out of range: " + code.int_value().str());
    return prefix + utf8(code.int_value().convert_to<unsigned long>());
  }
  throw Error("unexpected string literal shape: " + sexpr::print_term(s));
}

void collect_names(const Term& t, NameMap& names) { NameCollector(names).visit(t); }

NameMap build_name_map(const Term& t) {
  NameMap names;
  collect_names(t, names);
  return names;
}

}  // namespace ipm::bt
