#include "ipm/vc.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace ipm::vc {

using sexpr::CommandKind;
using sexpr::TermKind;

namespace {

bool is_option_command(const Command& c) {
  return c.kind == CommandKind::SetOption ||
         (c.kind == CommandKind::Other && (c.name == "set-info" || c.name == "set-logic"));
}

std::string where(const Command& c) {
  return " (command " + std::to_string(c.index + 1) + ", line " + std::to_string(c.pos().line) + ")";
}

/* ---------------------------------------------------------------------- */
/* Let inlining                                                            */
/* ---------------------------------------------------------------------- */

void collect_free(const Term& t, std::set<std::string>& bound, std::set<std::string>& out);

void collect_free_attrs(const Term& t, std::set<std::string>& bound, std::set<std::string>& out) {
  for (const auto& a : t.attrs()) {
    if (const auto* v = std::get_if<Term>(&a.value)) collect_free(*v, bound, out);
    if (const auto* l = std::get_if<std::vector<Term>>(&a.value))
      for (const auto& p : *l) collect_free(p, bound, out);
  }
}

void collect_free(const Term& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Symbol:
    case TermKind::QuotedSymbol:
      if (!bound.contains(t.text())) out.insert(t.text());
      return;
    case TermKind::App:
      collect_free(t.head(), bound, out);
      for (const auto& a : t.args()) collect_free(a, bound, out);
      return;
    case TermKind::Quantifier: {
      std::vector<std::string> added;
      for (const auto& v : t.vars())
        if (bound.insert(v.name).second) added.push_back(v.name);
      collect_free(t.body(), bound, out);
      for (const auto& n : added) bound.erase(n);
      return;
    }
    case TermKind::Let: {
      for (const auto& b : t.bindings()) collect_free(b.value, bound, out);
      std::vector<std::string> added;
      for (const auto& b : t.bindings())
        if (bound.insert(b.name).second) added.push_back(b.name);
      collect_free(t.body(), bound, out);
      for (const auto& n : added) bound.erase(n);
      return;
    }
    case TermKind::Annotated:
      collect_free(t.body(), bound, out);
      collect_free_attrs(t, bound, out);
      return;
    default:
      return;
  }
}

std::set<std::string> free_symbols(const Term& t) {
  std::set<std::string> bound, out;
  collect_free(t, bound, out);
  return out;
}

class LetInliner {
 public:
  explicit LetInliner(std::size_t budget) : budget_(budget) {}

  Term run(const Term& t) {
    Term out = go(t);
    return out;
  }

 private:
  struct Entry {
    Term value;
    std::set<std::string> free;
  };

  // name -> stack of visible let values; an empty optional marks a binder
  // (quantifier variable) that shadows an outer let.
  std::map<std::string, std::vector<std::optional<Entry>>> env_;
  std::vector<std::string> binders_;  // quantifier-bound names, innermost last
  std::size_t budget_;
  std::size_t produced_ = 0;

  void charge(std::size_t n) {
    produced_ += n;
    if (produced_ > budget_)
      throw Error("let inlining exceeds the budget of " + std::to_string(budget_) + " nodes");
  }

  const Entry* lookup(const std::string& name) const {
    auto it = env_.find(name);
    if (it == env_.end() || it->second.empty() || !it->second.back()) return nullptr;
    return &*it->second.back();
  }

  Term go(const Term& t) {
    switch (t.kind()) {
      case TermKind::Symbol:
      case TermKind::QuotedSymbol: {
        const Entry* e = lookup(t.text());
        if (!e) {
          charge(1);
          return t;
        }
        for (const auto& b : binders_)
          if (e->free.contains(b))
            throw Error("let inlining of '" + t.text() + "' would capture bound variable '" + b + "'");
        charge(e->value.size());
        return e->value;
      }
      case TermKind::App: {
        Term head = go(t.head());
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const auto& a : t.args()) args.push_back(go(a));
        charge(1);
        return Term::app(std::move(head), std::move(args));
      }
      case TermKind::Quantifier: {
        for (const auto& v : t.vars()) {
          env_[v.name].push_back(std::nullopt);
          binders_.push_back(v.name);
        }
        Term body = go(t.body());
        for (const auto& v : t.vars()) {
          env_[v.name].pop_back();
          binders_.pop_back();
        }
        charge(1);
        return Term::quantifier(t.quant(), std::vector<sexpr::SortedVar>(t.vars().begin(), t.vars().end()),
                                std::move(body));
      }
      case TermKind::Let: {
        std::vector<Entry> values;
        for (const auto& b : t.bindings()) {
          std::size_t before = produced_;
          Term v = go(b.value);
          produced_ = before;  // charged again at each use
          values.push_back({v, free_symbols(v)});
        }
        for (std::size_t i = 0; i < values.size(); ++i)
          env_[t.bindings()[i].name].push_back(std::move(values[i]));
        Term body = go(t.body());
        for (const auto& b : t.bindings()) env_[b.name].pop_back();
        return body;
      }
      case TermKind::Annotated: {
        Term body = go(t.body());
        std::vector<sexpr::Attr> attrs;
        for (const auto& a : t.attrs()) {
          sexpr::Attr copy{a.key, std::monostate{}};
          if (const auto* v = std::get_if<Term>(&a.value)) copy.value = go(*v);
          if (const auto* l = std::get_if<std::vector<Term>>(&a.value)) {
            std::vector<Term> pats;
            for (const auto& p : *l) pats.push_back(go(p));
            copy.value = std::move(pats);
          }
          attrs.push_back(std::move(copy));
        }
        charge(1);
        return Term::annotated(std::move(body), std::move(attrs));
      }
      default:
        charge(1);
        return t;
    }
  }
};

void flatten_conjunction(const Term& t, std::vector<Term>& out) {
  if (t.is_app_of("and")) {
    for (const auto& a : t.args()) flatten_conjunction(a, out);
    return;
  }
  out.push_back(t);
}

}  // namespace

std::vector<Command> ScriptSplit::reassemble() const {
  std::vector<Command> out;
  out.insert(out.end(), options.begin(), options.end());
  out.insert(out.end(), prelude.begin(), prelude.end());
  for (const auto& b : blocks) {
    out.push_back(*b.push);
    out.insert(out.end(), b.commands.begin(), b.commands.end());
    out.push_back(*b.pop);
  }
  std::stable_sort(out.begin(), out.end(), [](const Command& a, const Command& b) { return a.index < b.index; });
  return out;
}

ScriptSplit segment_script(const std::vector<Command>& commands) {
  ScriptSplit split;
  std::optional<VcBlock> open;
  for (const auto& c : commands) {
    if (c.kind == CommandKind::Push) {
      if (c.count != 1) throw Error("push with level count " + std::to_string(c.count) + " is not supported" + where(c));
      if (open) throw Error("nested push" + where(c));
      open.emplace();
      open->ordinal = split.blocks.size();
      open->push = c;
      continue;
    }
    if (c.kind == CommandKind::Pop) {
      if (c.count != 1) throw Error("pop with level count " + std::to_string(c.count) + " is not supported" + where(c));
      if (!open) throw Error("pop without matching push" + where(c));
      open->pop = c;
      split.blocks.push_back(std::move(*open));
      open.reset();
      continue;
    }
    if (open)
      open->commands.push_back(c);
    else if (is_option_command(c))
      split.options.push_back(c);
    else
      split.prelude.push_back(c);
  }
  if (open) throw Error("push without matching pop at end of script");
  return split;
}

Term inline_lets(const Term& t, std::size_t budget) { return LetInliner(budget).run(t); }

Term peel_implications(const Term& body, std::vector<Term>& hypotheses) {
  Term cur = body;
  while (cur.is_app_of("=>")) {
    auto args = cur.args();
    for (std::size_t i = 0; i + 1 < args.size(); ++i) flatten_conjunction(args[i], hypotheses);
    cur = args.back();
  }
  return cur;
}

Obligation extract_obligation(const VcBlock& block, const ExtractOptions& opts) {
  const Command* negated = nullptr;
  std::size_t check_sats = 0;
  std::vector<Command> locals;
  for (const auto& c : block.commands) {
    switch (c.kind) {
      case CommandKind::Assert:
        if (c.term->is_app_of("not") && c.term->args().size() == 1) {
          if (negated) throw Error("block contains more than one negated assertion" + where(c));
          negated = &c;
        } else {
          locals.push_back(c);
        }
        break;
      case CommandKind::CheckSat:
        ++check_sats;
        break;
      case CommandKind::DeclareFun:
      case CommandKind::DeclareSort:
      case CommandKind::DefineFun:
        locals.push_back(c);
        break;
      default:
        break;
    }
  }
  if (!negated) throw Error("block " + std::to_string(block.ordinal + 1) + " has no assertion of the form (not ...)");
  if (check_sats != 1)
    throw Error("block " + std::to_string(block.ordinal + 1) + " has " + std::to_string(check_sats) +
                " check-sat commands, expected 1");

  Term body = inline_lets(negated->term->arg(0), opts.inline_budget);
  Obligation ob{{}, body, std::move(locals), std::make_shared<VcBlock>(block), false};
  ob.goal = peel_implications(body, ob.hypotheses);
  return ob;
}

bool contains_protect_to_prove(const Term& t) {
  switch (t.kind()) {
    case TermKind::App: {
      if (t.head_name().find("__protectToProve") != std::string_view::npos) return true;
      if (contains_protect_to_prove(t.head())) return true;
      for (const auto& a : t.args())
        if (contains_protect_to_prove(a)) return true;
      return false;
    }
    case TermKind::Quantifier:
    case TermKind::Let:
    case TermKind::Annotated:
      if (t.kind() == TermKind::Let)
        for (const auto& b : t.bindings())
          if (contains_protect_to_prove(b.value)) return true;
      return contains_protect_to_prove(t.body());
    default:
      return false;
  }
}

std::vector<Obligation> find_ipm_targets(std::vector<Obligation>& obligations) {
  std::vector<Obligation> out;
  for (auto& ob : obligations) {
    ob.is_ipm_target = contains_protect_to_prove(ob.goal);
    if (ob.is_ipm_target) out.push_back(ob);
  }
  return out;
}

}  // namespace ipm::vc
