#include "tm2qbf/translator.hpp"

#include <functional>
#include <iterator>
#include <unordered_map>

#include "tm2qbf/render.hpp"
#include "tm2qbf/substitution.hpp"

namespace tm2qbf {

namespace {

bool is_const(const TermPtr& t) { return t->is_constant(); }

bool is_junction(const TermPtr& t) { return t->kind == TermKind::Meet || t->kind == TermKind::Join; }

FormulaPtr sim(TermPtr l, TermPtr r) { return fo::sim(std::move(l), std::move(r)); }

// Rules (b) and (c) with u on the other side of the atom.
FormulaPtr split_against(const TermPtr& junction, const TermPtr& u) {
  const TermPtr& t1 = junction->a;
  const TermPtr& t2 = junction->b;
  // For ∪ the "any" side is c1, for ∩ it is c0.
  TermPtr any = junction->kind == TermKind::Join ? term::c1() : term::c0();
  TermPtr all = junction->kind == TermKind::Join ? term::c0() : term::c1();
  FormulaPtr first = fo::implies(fo::disj(sim(t1, any), sim(t2, any)), sim(u, any));
  FormulaPtr second = fo::implies(fo::conj(sim(t1, all), sim(t2, all)), sim(u, all));
  return fo::conj(first, second);
}

// Stage three: a compound term against c0 or c1.
FormulaPtr split_against_constant(const TermPtr& junction, const TermPtr& c) {
  FormulaPtr l = sim(junction->a, c);
  FormulaPtr r = sim(junction->b, c);
  bool join = junction->kind == TermKind::Join;
  bool one = c->kind == TermKind::C1;
  return join == one ? fo::disj(l, r) : fo::conj(l, r);
}

enum class Phase { Eliminate, Split };

// One rewrite step on a ∼ atom, or nullptr when the atom is not a redex.
FormulaPtr rewrite_atom(const Formula& atom, Phase phase) {
  const TermPtr& l = atom.lhs;
  const TermPtr& r = atom.rhs;
  if (l->kind == TermKind::Complement) return fo::neg(sim(l->a, r));
  if (r->kind == TermKind::Complement) return fo::neg(sim(l, r->a));
  if (is_junction(l) && !is_const(r)) return split_against(l, r);
  if (is_junction(r) && !is_const(l)) return split_against(r, l);
  if (phase == Phase::Split) {
    if (is_junction(l) && (r->kind == TermKind::C0 || r->kind == TermKind::C1)) return split_against_constant(l, r);
    if (is_junction(r) && (l->kind == TermKind::C0 || l->kind == TermKind::C1)) return split_against_constant(r, l);
  }
  return nullptr;
}

class Rewriter {
 public:
  using AtomFn = std::function<FormulaPtr(const Formula&)>;

  explicit Rewriter(AtomFn fn) : fn_(std::move(fn)) {}

  FormulaPtr run(const FormulaPtr& f) {
    if (auto it = memo_.find(f.get()); it != memo_.end()) return it->second;
    FormulaPtr out;
    switch (f->kind) {
      case FormulaKind::Eq:
      case FormulaKind::Sim:
      case FormulaKind::Pred: {
        auto r = fn_(*f);
        out = r ? r : f;
        break;
      }
      case FormulaKind::Not: {
        auto a = run(f->a);
        out = a == f->a ? f : fo::neg(a);
        break;
      }
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies: {
        auto a = run(f->a);
        auto b = run(f->b);
        out = a == f->a && b == f->b ? f : fo::rebuild(*f, a, b);
        break;
      }
      case FormulaKind::ForAll:
      case FormulaKind::Exists: {
        auto a = run(f->a);
        out = a == f->a ? f : fo::quantifier(f->kind, f->vars, a);
        break;
      }
    }
    memo_.emplace(f.get(), out);
    return out;
  }

 private:
  AtomFn fn_;
  std::unordered_map<const Formula*, FormulaPtr> memo_;
};

TermPtr replace_constants(const TermPtr& t, std::unordered_map<const Term*, TermPtr>& memo) {
  if (auto it = memo.find(t.get()); it != memo.end()) return it->second;
  TermPtr out = t;
  switch (t->kind) {
    case TermKind::Zero: out = term::c0(); break;
    case TermKind::One: out = term::c1(); break;
    case TermKind::Complement: {
      auto a = replace_constants(t->a, memo);
      if (a != t->a) out = term::comp(a);
      break;
    }
    case TermKind::Meet:
    case TermKind::Join: {
      auto a = replace_constants(t->a, memo);
      auto b = replace_constants(t->b, memo);
      if (a != t->a || b != t->b) out = t->kind == TermKind::Meet ? term::meet(a, b) : term::join(a, b);
      break;
    }
    default: break;
  }
  memo.emplace(t.get(), out);
  return out;
}

void check_residual(const TermPtr& t) {
  if (t->kind != TermKind::Var && t->kind != TermKind::C0 && t->kind != TermKind::C1) {
    throw TranslationError("residual compound term survives translation: " + render_natural(t));
  }
}

// Runs passes of `fn` until a pass changes nothing.
FormulaPtr fixpoint(FormulaPtr f, const Rewriter::AtomFn& fn, TranslationStats& stats) {
  std::size_t before = length_natural(f);
  for (;;) {
    FormulaPtr next = Rewriter(fn).run(f);
    if (next == f) return f;
    ++stats.passes;
    std::size_t after = length_natural(next);
    stats.lengths.push_back(after);
    stats.symbol_counts.push_back(boolean_symbol_count(next));
    if (after > kPassGrowthWarning * before) {
      stats.warnings.push_back("pass " + std::to_string(stats.passes) + " grew the formula from " +
                               std::to_string(before) + " to " + std::to_string(after) + " symbols");
    }
    before = after;
    f = std::move(next);
  }
}

void require_boolean_sentence(const FormulaPtr& f) {
  try {
    validate(f, Signature::boolean());
  } catch (const SignatureError& e) {
    throw TranslationError(e.what());
  }
  if (!is_closed(f)) throw TranslationError("input has free variables");
}

// Renames every bound variable of f to a fresh variable of kind 'n'.
class BoundRenamer {
 public:
  explicit BoundRenamer(Index first_group) : next_(first_group) {}

  FormulaPtr run(const FormulaPtr& f) {
    switch (f->kind) {
      case FormulaKind::Eq:
      case FormulaKind::Sim:
      case FormulaKind::Pred: return subst_.map.empty() ? f : substitute(f, subst_);
      case FormulaKind::Not: return fo::neg(run(f->a));
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies: return fo::rebuild(*f, run(f->a), run(f->b));
      case FormulaKind::ForAll:
      case FormulaKind::Exists: {
        Substitution saved = subst_;
        std::vector<VarId> fresh;
        for (const auto& v : f->vars) {
          VarId n{'n', next_++, 0};
          fresh.push_back(n);
          subst_.map[v] = term::var(n);
        }
        auto body = run(f->a);
        subst_ = std::move(saved);
        return fo::quantifier(f->kind, std::move(fresh), body);
      }
    }
    return f;
  }

 private:
  Index next_;
  Substitution subst_;
};

}  // namespace

FormulaPtr relativize(const FormulaPtr& f) {
  std::unordered_map<const Formula*, FormulaPtr> memo;
  std::function<FormulaPtr(const FormulaPtr&)> go = [&](const FormulaPtr& g) -> FormulaPtr {
    if (auto it = memo.find(g.get()); it != memo.end()) return it->second;
    FormulaPtr out;
    switch (g->kind) {
      case FormulaKind::Eq: out = sim(g->lhs, g->rhs); break;
      case FormulaKind::Sim:
      case FormulaKind::Pred: out = g; break;
      case FormulaKind::Not: out = fo::neg(go(g->a)); break;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies: out = fo::rebuild(*g, go(g->a), go(g->b)); break;
      case FormulaKind::ForAll:
      case FormulaKind::Exists: {
        std::vector<FormulaPtr> guards;
        for (const auto& v : g->vars) {
          guards.push_back(fo::disj(sim(term::var(v), term::c0()), sim(term::var(v), term::c1())));
        }
        FormulaPtr guard = fo::conj_all(guards);
        FormulaPtr body = go(g->a);
        out = fo::quantifier(g->kind, g->vars,
                             g->kind == FormulaKind::ForAll ? fo::implies(guard, body) : fo::conj(guard, body));
        break;
      }
    }
    memo.emplace(g.get(), out);
    return out;
  };
  return go(f);
}

std::size_t boolean_symbol_count(const FormulaPtr& f) {
  std::unordered_map<const Term*, std::size_t> tmemo;
  std::function<std::size_t(const TermPtr&)> term_count = [&](const TermPtr& t) -> std::size_t {
    if (auto it = tmemo.find(t.get()); it != tmemo.end()) return it->second;
    std::size_t n = 0;
    switch (t->kind) {
      case TermKind::Zero:
      case TermKind::One: n = 1; break;
      case TermKind::Complement: n = 1 + term_count(t->a); break;
      case TermKind::Meet:
      case TermKind::Join: n = 1 + term_count(t->a) + term_count(t->b); break;
      default: break;
    }
    tmemo.emplace(t.get(), n);
    return n;
  };
  std::unordered_map<const Formula*, std::size_t> memo;
  std::function<std::size_t(const FormulaPtr&)> count = [&](const FormulaPtr& g) -> std::size_t {
    if (auto it = memo.find(g.get()); it != memo.end()) return it->second;
    std::size_t n = 0;
    switch (g->kind) {
      case FormulaKind::Eq: n = 1 + term_count(g->lhs) + term_count(g->rhs); break;
      case FormulaKind::Sim:
      case FormulaKind::Pred: n = term_count(g->lhs) + term_count(g->rhs); break;
      case FormulaKind::Not:
      case FormulaKind::ForAll:
      case FormulaKind::Exists: n = count(g->a); break;
      default: n = count(g->a) + count(g->b); break;
    }
    memo.emplace(g.get(), n);
    return n;
  };
  return count(f);
}

FormulaPtr translate_20(const FormulaPtr& sentence, TranslationStats* stats) {
  require_boolean_sentence(sentence);
  TranslationStats local;
  TranslationStats& st = stats ? *stats : local;
  FormulaPtr f = relativize(sentence);
  st.lengths.push_back(length_natural(f));
  st.symbol_counts.push_back(boolean_symbol_count(f));

  f = fixpoint(f, [](const Formula& a) { return a.kind == FormulaKind::Sim ? rewrite_atom(a, Phase::Eliminate) : nullptr; }, st);

  std::unordered_map<const Term*, TermPtr> cmemo;
  f = Rewriter([&](const Formula& a) -> FormulaPtr {
        auto l = replace_constants(a.lhs, cmemo);
        auto r = replace_constants(a.rhs, cmemo);
        if (l == a.lhs && r == a.rhs) return nullptr;
        return sim(l, r);
      }).run(f);

  f = fixpoint(f, [](const Formula& a) { return a.kind == FormulaKind::Sim ? rewrite_atom(a, Phase::Split) : nullptr; }, st);

  Rewriter([](const Formula& a) -> FormulaPtr {
    check_residual(a.lhs);
    check_residual(a.rhs);
    return nullptr;
  }).run(f);
  return f;
}

std::pair<VarId, VarId> fresh_constant_vars(const FormulaPtr& f) {
  VarSet used = bound_vars(f);
  for (const auto& v : free_vars(f)) used.insert(v);
  Index g = 0;
  while (used.count(VarId{'e', g, 0}) || used.count(VarId{'e', g, 1})) ++g;
  return {VarId{'e', g, 0}, VarId{'e', g, 1}};
}

namespace {

// ∃a,b[head ∧ body] with c0, c1 of the 2.0 form replaced by a, b.
FormulaPtr close_over_constants(const FormulaPtr& f20, const std::function<FormulaPtr(TermPtr, TermPtr)>& head,
                                const Rewriter::AtomFn& atom_map) {
  auto [a, b] = fresh_constant_vars(f20);
  TermPtr ta = term::var(a);
  TermPtr tb = term::var(b);
  auto swap_const = [&](const TermPtr& t) {
    if (t->kind == TermKind::C0) return ta;
    if (t->kind == TermKind::C1) return tb;
    return t;
  };
  FormulaPtr body = Rewriter([&](const Formula& at) -> FormulaPtr {
                      auto l = swap_const(at.lhs);
                      auto r = swap_const(at.rhs);
                      FormulaPtr replaced = (l == at.lhs && r == at.rhs) ? nullptr : sim(l, r);
                      if (!atom_map) return replaced;
                      return atom_map(replaced ? *replaced : at);
                    }).run(f20);
  return fo::exists({a, b}, fo::conj(head(ta, tb), body));
}

}  // namespace

FormulaPtr translate_21(const FormulaPtr& sentence, TranslationStats* stats) {
  FormulaPtr f20 = translate_20(sentence, stats);
  return close_over_constants(
      f20, [](TermPtr a, TermPtr b) { return fo::neg(fo::sim(a, b)); }, nullptr);
}

FormulaPtr translate_22(const FormulaPtr& sentence, const FormulaPtr& n_formula, TranslationStats* stats) {
  VarSet nfree = free_vars(n_formula);
  if (nfree.size() != 2) {
    throw TranslationError("N formula must have exactly two free variables, found " + std::to_string(nfree.size()));
  }
  try {
    Signature sig = infer_signature(n_formula);
    if (sig.kind != Signature::Kind::Relational) throw TranslationError("N formula must be relational");
  } catch (const SignatureError& e) {
    throw TranslationError(e.what());
  }
  FormulaPtr f20 = translate_20(sentence, stats);
  VarId x = *nfree.begin();
  VarId y = *std::next(nfree.begin());

  // Rename N's bound variables apart from everything in the sentence.
  VarSet used = bound_vars(f20);
  used.insert(nfree.begin(), nfree.end());
  Index first = 0;
  for (const auto& v : used) {
    if (v.kind == 'n' && v.group >= first) first = v.group + 1;
  }
  FormulaPtr n = BoundRenamer(first).run(n_formula);

  auto instance = [&](const TermPtr& t, const TermPtr& s) {
    Substitution sub;
    sub.add(x, t);
    sub.add(y, s);
    return substitute(n, sub);
  };
  return close_over_constants(
      f20, [&](TermPtr a, TermPtr b) { return instance(a, b); },
      [&](const Formula& at) -> FormulaPtr {
        if (at.kind != FormulaKind::Sim) return nullptr;
        return fo::neg(instance(at.lhs, at.rhs));
      });
}

}  // namespace tm2qbf
