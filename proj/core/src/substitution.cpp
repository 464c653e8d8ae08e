#include "tm2qbf/substitution.hpp"

#include <memory>
#include <string>
#include <unordered_map>

namespace tm2qbf {

void Substitution::add(const VarId& v, TermPtr t) { map[v] = std::move(t); }

void Substitution::add(const VarTuple& from, const TermTuple& to) {
  if (from.size() != to.size()) {
    throw std::invalid_argument("substitution: tuple widths differ (" + std::to_string(from.size()) +
                                " vs " + std::to_string(to.size()) + ")");
  }
  for (std::size_t i = 0; i < from.size(); ++i) add(from[i], to[i]);
}

void Substitution::add(const VarTuple& from, const VarTuple& to) { add(from, as_terms(to)); }

namespace {

class Substituter {
 public:
  explicit Substituter(const Substitution& s) { push_context(s.map); }

  TermPtr term(const TermPtr& t) { return term_in(t, *contexts_.front()); }
  FormulaPtr formula(const FormulaPtr& f) { return formula_in(f, *contexts_.front()); }

 private:
  struct Context {
    std::map<VarId, TermPtr> map;
    VarSet range_vars;  // every variable occurring in a replacement term
    std::unordered_map<const Term*, TermPtr> term_memo;
    std::unordered_map<const Formula*, FormulaPtr> formula_memo;
    std::map<std::vector<VarId>, Context*> children;
  };

  Context* push_context(std::map<VarId, TermPtr> map) {
    auto ctx = std::make_unique<Context>();
    ctx->map = std::move(map);
    for (const auto& [v, t] : ctx->map) collect_vars(t, ctx->range_vars);
    contexts_.push_back(std::move(ctx));
    return contexts_.back().get();
  }

  TermPtr term_in(const TermPtr& t, Context& ctx) {
    switch (t->kind) {
      case TermKind::Zero:
      case TermKind::One:
      case TermKind::C0:
      case TermKind::C1:
        return t;
      case TermKind::Var: {
        auto it = ctx.map.find(t->var);
        return it == ctx.map.end() ? t : it->second;
      }
      default:
        break;
    }
    if (auto it = ctx.term_memo.find(t.get()); it != ctx.term_memo.end()) return it->second;
    TermPtr out;
    if (t->kind == TermKind::Complement) {
      auto a = term_in(t->a, ctx);
      out = a == t->a ? t : term::comp(a);
    } else {
      auto a = term_in(t->a, ctx);
      auto b = term_in(t->b, ctx);
      if (a == t->a && b == t->b) {
        out = t;
      } else {
        out = t->kind == TermKind::Meet ? term::meet(a, b) : term::join(a, b);
      }
    }
    ctx.term_memo.emplace(t.get(), out);
    return out;
  }

  // The context active inside a quantifier binding `vars`.
  Context& enter(Context& ctx, const Formula& q) {
    bool shadows = false;
    for (const auto& v : q.vars) {
      if (ctx.map.count(v)) shadows = true;
    }
    Context* inner = &ctx;
    if (shadows) {
      auto it = ctx.children.find(q.vars);
      if (it != ctx.children.end()) {
        inner = it->second;
      } else {
        auto map = ctx.map;
        for (const auto& v : q.vars) map.erase(v);
        inner = push_context(std::move(map));
        ctx.children.emplace(q.vars, inner);
      }
    }
    return *inner;
  }

  void check_capture(const Context& inner, const FormulaPtr& q) {
    bool risky = false;
    for (const auto& v : q->vars) {
      if (inner.range_vars.count(v)) risky = true;
    }
    if (!risky) return;
    // Precise check: a key that occurs free in the body and whose
    // replacement mentions a variable bound here.
    VarSet body_free = free_vars(q->a);
    for (const auto& [key, t] : inner.map) {
      if (!body_free.count(key)) continue;
      VarSet tv;
      collect_vars(t, tv);
      for (const auto& v : q->vars) {
        if (tv.count(v)) {
          throw CaptureError("substituting for " + to_string(key) + " would capture " + to_string(v));
        }
      }
    }
  }

  FormulaPtr formula_in(const FormulaPtr& f, Context& ctx) {
    if (ctx.map.empty()) return f;
    if (auto it = ctx.formula_memo.find(f.get()); it != ctx.formula_memo.end()) return it->second;
    FormulaPtr out;
    switch (f->kind) {
      case FormulaKind::Eq:
      case FormulaKind::Sim:
      case FormulaKind::Pred: {
        auto l = term_in(f->lhs, ctx);
        auto r = term_in(f->rhs, ctx);
        if (l == f->lhs && r == f->rhs) {
          out = f;
        } else if (f->kind == FormulaKind::Eq) {
          out = fo::eq(l, r);
        } else if (f->kind == FormulaKind::Sim) {
          out = fo::sim(l, r);
        } else {
          out = fo::pred(f->pred, l, r);
        }
        break;
      }
      case FormulaKind::Not: {
        auto a = formula_in(f->a, ctx);
        out = a == f->a ? f : fo::neg(a);
        break;
      }
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies: {
        auto a = formula_in(f->a, ctx);
        auto b = formula_in(f->b, ctx);
        out = a == f->a && b == f->b ? f : fo::rebuild(*f, a, b);
        break;
      }
      case FormulaKind::ForAll:
      case FormulaKind::Exists: {
        Context& inner = enter(ctx, *f);
        check_capture(inner, f);
        auto a = formula_in(f->a, inner);
        out = a == f->a ? f : fo::quantifier(f->kind, f->vars, a);
        break;
      }
    }
    ctx.formula_memo.emplace(f.get(), out);
    return out;
  }

  std::vector<std::unique_ptr<Context>> contexts_;
};

}  // namespace

TermPtr substitute(const TermPtr& t, const Substitution& s) { return Substituter(s).term(t); }

FormulaPtr substitute(const FormulaPtr& f, const Substitution& s) { return Substituter(s).formula(f); }

FormulaPtr substitute_tuple(const FormulaPtr& f, const VarTuple& from, const TermTuple& to) {
  Substitution s;
  s.add(from, to);
  return substitute(f, s);
}

}  // namespace tm2qbf
