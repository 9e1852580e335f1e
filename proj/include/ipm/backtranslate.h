#pragma once

// Back-translation of Boogie/Dafny SMT-LIB terms into Dafny-level formulas.
//
// Only `strip_protections` changes what the solver sees; everything else
// produces display forms.

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ipm/expr.h"
#include "ipm/sexpr.h"

namespace ipm::bt {

using sexpr::Term;

struct NameEntry {
  std::string dafny_name;
  std::string smt_name;
  bool in_scope = false;

  friend bool operator==(const NameEntry&, const NameEntry&) = default;
};

/// Bidirectional map between Dafny identifiers and mangled SMT identifiers.
/// A Dafny name may map to several SMT names when it is shadowed; at most
/// one of them is marked in scope.
class NameMap {
 public:
  /// Adds or merges an entry. Throws when `smt` is already claimed by a
  /// different Dafny name, or when a second SMT name for `dafny` would be
  /// marked in scope.
  void add(const std::string& dafny, const std::string& smt, bool in_scope);

  std::optional<std::string> dafny_name(std::string_view smt) const;
  /// Forward lookup; the in-scope entry wins, then a sole entry.
  std::optional<std::string> smt_name(std::string_view dafny) const;
  std::vector<std::string> smt_names(std::string_view dafny) const;
  std::vector<std::string> dafny_names() const;

  /// The name to show for `smt`: its Dafny name when that name resolves
  /// back to `smt`, otherwise the raw mangled name.
  std::string display_name(std::string_view smt) const;

  const std::vector<NameEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const NameMap&, const NameMap&) = default;

 private:
  std::vector<NameEntry> entries_;
};

enum class ProtectionKind { Protect, Scope, ToProve };

/// Recognizes `*__protect`, `*__protectScope` and `*__protectToProve` heads.
std::optional<ProtectionKind> protection_kind(const Term& t);

/// Heads that only box, unbox or mark literals: `$Box_*`, `$Unbox_*`,
/// `Lit_*`, `Lit`, `LitInt`.
bool is_box_head(std::string_view head);
bool is_unbox_head(std::string_view head);
bool is_lit_head(std::string_view head);

/// Decodes a Dafny string literal encoded as a `Seq#Build` chain of
/// `char#FromInt` codes (or a plain SMT string literal).
std::string decode_string_literal(const Term& t);

NameMap build_name_map(const Term& t);
/// Accumulates the names found in `t` into `names`.
void collect_names(const Term& t, NameMap& names);

Term strip_protections(const Term& t);

struct Suppressed {};
using DisplayForm = std::variant<ExprPtr, Suppressed>;

/// Display form of a protection-free term; no value when the term falls
/// outside the supported fragment.
std::optional<DisplayForm> display_rewrite(const Term& t, const NameMap& names);

/// One hypothesis or goal as shown to the user.
struct DisplayedFormula {
  std::size_t source_index = 0;  // index in the solver-facing list
  ExprPtr expr;                  // null when rendered raw
  std::string text;
  std::set<std::string> names;   // display names occurring in it
  bool suppressed = false;       // bookkeeping fact, never shown

  bool is_raw() const { return expr == nullptr; }
};

DisplayedFormula display_formula(const Term& t, const NameMap& names, std::size_t index = 0);

/// Drops hypotheses `v == e` whose variable occurs in no other displayed
/// hypothesis and not in the goal, until nothing changes.
std::vector<DisplayedFormula> eliminate_dead_definitions(std::vector<DisplayedFormula> hypotheses,
                                                         const DisplayedFormula& goal);

struct DisplayedObligation {
  std::vector<DisplayedFormula> hypotheses;
  DisplayedFormula goal;
};

DisplayedObligation display_obligation(std::span<const Term> hypotheses, const Term& goal,
                                       const NameMap& names);

}  // namespace ipm::bt
