#include <algorithm>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "tm2qbf/formula.hpp"

namespace tm2qbf {

namespace term {

namespace {
TermPtr make_leaf(TermKind k) { return std::make_shared<const Term>(Term{k, {}, nullptr, nullptr}); }
}  // namespace

TermPtr zero() {
  static const TermPtr t = make_leaf(TermKind::Zero);
  return t;
}
TermPtr one() {
  static const TermPtr t = make_leaf(TermKind::One);
  return t;
}
TermPtr c0() {
  static const TermPtr t = make_leaf(TermKind::C0);
  return t;
}
TermPtr c1() {
  static const TermPtr t = make_leaf(TermKind::C1);
  return t;
}
TermPtr var(const VarId& v) {
  return std::make_shared<const Term>(Term{TermKind::Var, v, nullptr, nullptr});
}
TermPtr var(char kind, Index group, std::uint32_t bit) { return var(VarId{kind, group, bit}); }
TermPtr comp(TermPtr t) {
  return std::make_shared<const Term>(Term{TermKind::Complement, {}, std::move(t), nullptr});
}
TermPtr meet(TermPtr x, TermPtr y) {
  return std::make_shared<const Term>(Term{TermKind::Meet, {}, std::move(x), std::move(y)});
}
TermPtr join(TermPtr x, TermPtr y) {
  return std::make_shared<const Term>(Term{TermKind::Join, {}, std::move(x), std::move(y)});
}
TermPtr xor_(TermPtr x, TermPtr y) { return join(meet(x, comp(y)), meet(comp(x), y)); }
TermPtr constant(bool bit) { return bit ? one() : zero(); }

}  // namespace term

namespace fo {

namespace {
FormulaPtr make(FormulaKind k, TermPtr l, TermPtr r, std::string p, FormulaPtr a, FormulaPtr b,
                std::vector<VarId> vars) {
  return std::make_shared<const Formula>(
      Formula{k, std::move(l), std::move(r), std::move(p), std::move(a), std::move(b), std::move(vars)});
}
}  // namespace

FormulaPtr eq(TermPtr l, TermPtr r) { return make(FormulaKind::Eq, std::move(l), std::move(r), {}, nullptr, nullptr, {}); }
FormulaPtr sim(TermPtr l, TermPtr r) { return make(FormulaKind::Sim, std::move(l), std::move(r), {}, nullptr, nullptr, {}); }
FormulaPtr pred(std::string name, TermPtr l, TermPtr r) {
  return make(FormulaKind::Pred, std::move(l), std::move(r), std::move(name), nullptr, nullptr, {});
}
FormulaPtr neg(FormulaPtr f) { return make(FormulaKind::Not, nullptr, nullptr, {}, std::move(f), nullptr, {}); }
FormulaPtr conj(FormulaPtr x, FormulaPtr y) {
  return make(FormulaKind::And, nullptr, nullptr, {}, std::move(x), std::move(y), {});
}
FormulaPtr disj(FormulaPtr x, FormulaPtr y) {
  return make(FormulaKind::Or, nullptr, nullptr, {}, std::move(x), std::move(y), {});
}
FormulaPtr implies(FormulaPtr x, FormulaPtr y) {
  return make(FormulaKind::Implies, nullptr, nullptr, {}, std::move(x), std::move(y), {});
}
FormulaPtr quantifier(FormulaKind kind, std::vector<VarId> vars, FormulaPtr body) {
  if (kind != FormulaKind::ForAll && kind != FormulaKind::Exists) {
    throw std::invalid_argument("quantifier(): kind is not a quantifier");
  }
  if (vars.empty()) throw std::invalid_argument("quantifier with an empty variable list");
  return make(kind, nullptr, nullptr, {}, std::move(body), nullptr, std::move(vars));
}
FormulaPtr forall(std::vector<VarId> vars, FormulaPtr body) {
  return quantifier(FormulaKind::ForAll, std::move(vars), std::move(body));
}
FormulaPtr exists(std::vector<VarId> vars, FormulaPtr body) {
  return quantifier(FormulaKind::Exists, std::move(vars), std::move(body));
}

FormulaPtr conj_all(const std::vector<FormulaPtr>& parts) {
  if (parts.empty()) throw std::invalid_argument("conj_all of an empty list");
  FormulaPtr acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
  return acc;
}

FormulaPtr disj_all(const std::vector<FormulaPtr>& parts) {
  if (parts.empty()) throw std::invalid_argument("disj_all of an empty list");
  FormulaPtr acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
  return acc;
}

FormulaPtr rebuild(const Formula& like, FormulaPtr a, FormulaPtr b) {
  return make(like.kind, like.lhs, like.rhs, like.pred, std::move(a), std::move(b), like.vars);
}

}  // namespace fo

void collect_vars(const TermPtr& t, VarSet& out) {
  switch (t->kind) {
    case TermKind::Var:
      out.insert(t->var);
      return;
    case TermKind::Complement:
      collect_vars(t->a, out);
      return;
    case TermKind::Meet:
    case TermKind::Join:
      collect_vars(t->a, out);
      collect_vars(t->b, out);
      return;
    default:
      return;
  }
}

namespace {

class FreeVarWalker {
 public:
  const VarSet& visit(const FormulaPtr& f) {
    if (auto it = memo_.find(f.get()); it != memo_.end()) return it->second;
    VarSet out;
    switch (f->kind) {
      case FormulaKind::Eq:
      case FormulaKind::Sim:
      case FormulaKind::Pred:
        collect_vars(f->lhs, out);
        collect_vars(f->rhs, out);
        break;
      case FormulaKind::Not:
        out = visit(f->a);
        break;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies: {
        out = visit(f->a);
        const auto& rb = visit(f->b);
        out.insert(rb.begin(), rb.end());
        break;
      }
      case FormulaKind::ForAll:
      case FormulaKind::Exists:
        out = visit(f->a);
        for (const auto& v : f->vars) out.erase(v);
        break;
    }
    return memo_.emplace(f.get(), std::move(out)).first->second;
  }

 private:
  std::unordered_map<const Formula*, VarSet> memo_;
};

struct BindingInfo {
  VarSet bound;
  bool ok = true;
};

class BindingWalker {
 public:
  const BindingInfo& visit(const FormulaPtr& f) {
    if (auto it = memo_.find(f.get()); it != memo_.end()) return it->second;
    BindingInfo info;
    switch (f->kind) {
      case FormulaKind::Eq:
      case FormulaKind::Sim:
      case FormulaKind::Pred:
        break;
      case FormulaKind::Not:
        info = visit(f->a);
        break;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies: {
        info = visit(f->a);
        const auto& rb = visit(f->b);
        info.bound.insert(rb.bound.begin(), rb.bound.end());
        info.ok = info.ok && rb.ok;
        break;
      }
      case FormulaKind::ForAll:
      case FormulaKind::Exists: {
        info = visit(f->a);
        for (const auto& v : f->vars) {
          if (!info.bound.insert(v).second) info.ok = false;
        }
        break;
      }
    }
    return memo_.emplace(f.get(), std::move(info)).first->second;
  }

 private:
  std::unordered_map<const Formula*, BindingInfo> memo_;
};

}  // namespace

VarSet free_vars(const FormulaPtr& f) {
  FreeVarWalker w;
  return w.visit(f);
}

VarSet bound_vars(const FormulaPtr& f) {
  BindingWalker w;
  return w.visit(f).bound;
}

bool is_closed(const FormulaPtr& f) { return free_vars(f).empty(); }

bool no_shadowing(const FormulaPtr& f) {
  BindingWalker w;
  return w.visit(f).ok;
}

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<const void*, const void*>& p) const noexcept {
    return std::hash<const void*>{}(p.first) * 31 ^ std::hash<const void*>{}(p.second);
  }
};

class EqualityChecker {
 public:
  bool terms(const TermPtr& x, const TermPtr& y) {
    if (x == y) return true;
    if (!x || !y || x->kind != y->kind) return false;
    auto key = std::make_pair(static_cast<const void*>(x.get()), static_cast<const void*>(y.get()));
    if (known_.count(key)) return true;
    bool same = false;
    switch (x->kind) {
      case TermKind::Var:
        same = x->var == y->var;
        break;
      case TermKind::Complement:
        same = terms(x->a, y->a);
        break;
      case TermKind::Meet:
      case TermKind::Join:
        same = terms(x->a, y->a) && terms(x->b, y->b);
        break;
      default:
        same = true;
    }
    if (same) known_.insert(key);
    return same;
  }

  bool formulas(const FormulaPtr& x, const FormulaPtr& y) {
    if (x == y) return true;
    if (!x || !y || x->kind != y->kind) return false;
    auto key = std::make_pair(static_cast<const void*>(x.get()), static_cast<const void*>(y.get()));
    if (known_.count(key)) return true;
    bool same = false;
    switch (x->kind) {
      case FormulaKind::Eq:
      case FormulaKind::Sim:
        same = terms(x->lhs, y->lhs) && terms(x->rhs, y->rhs);
        break;
      case FormulaKind::Pred:
        same = x->pred == y->pred && terms(x->lhs, y->lhs) && terms(x->rhs, y->rhs);
        break;
      case FormulaKind::Not:
        same = formulas(x->a, y->a);
        break;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies:
        same = formulas(x->a, y->a) && formulas(x->b, y->b);
        break;
      case FormulaKind::ForAll:
      case FormulaKind::Exists:
        same = x->vars == y->vars && formulas(x->a, y->a);
        break;
    }
    if (same) known_.insert(key);
    return same;
  }

 private:
  std::unordered_set<std::pair<const void*, const void*>, PairHash> known_;
};

}  // namespace

bool structurally_equal(const TermPtr& x, const TermPtr& y) { return EqualityChecker{}.terms(x, y); }
bool structurally_equal(const FormulaPtr& x, const FormulaPtr& y) {
  return EqualityChecker{}.formulas(x, y);
}

std::size_t dag_size(const FormulaPtr& f) {
  std::unordered_set<const Formula*> seen;
  std::vector<const Formula*> stack{f.get()};
  while (!stack.empty()) {
    const Formula* n = stack.back();
    stack.pop_back();
    if (!n || !seen.insert(n).second) continue;
    stack.push_back(n->a.get());
    stack.push_back(n->b.get());
  }
  return seen.size();
}

namespace {

struct SymbolUse {
  bool eq = false;
  bool sim = false;
  bool boolean_terms = false;  // 0, 1, C, ∩, ∪
  bool rel_constants = false;  // c0, c1
  std::set<std::string> preds;
};

void scan_term(const TermPtr& t, SymbolUse& use, std::unordered_set<const Term*>& seen) {
  if (!seen.insert(t.get()).second) return;
  switch (t->kind) {
    case TermKind::Zero:
    case TermKind::One:
      use.boolean_terms = true;
      break;
    case TermKind::C0:
    case TermKind::C1:
      use.rel_constants = true;
      break;
    case TermKind::Var:
      break;
    case TermKind::Complement:
      use.boolean_terms = true;
      scan_term(t->a, use, seen);
      break;
    case TermKind::Meet:
    case TermKind::Join:
      use.boolean_terms = true;
      scan_term(t->a, use, seen);
      scan_term(t->b, use, seen);
      break;
  }
}

SymbolUse scan(const FormulaPtr& root) {
  SymbolUse use;
  std::unordered_set<const Formula*> seen;
  std::unordered_set<const Term*> seen_terms;
  std::vector<const Formula*> stack{root.get()};
  while (!stack.empty()) {
    const Formula* f = stack.back();
    stack.pop_back();
    if (!f || !seen.insert(f).second) continue;
    switch (f->kind) {
      case FormulaKind::Eq:
        use.eq = true;
        break;
      case FormulaKind::Sim:
        use.sim = true;
        break;
      case FormulaKind::Pred:
        use.preds.insert(f->pred);
        break;
      default:
        break;
    }
    if (f->is_atom()) {
      scan_term(f->lhs, use, seen_terms);
      scan_term(f->rhs, use, seen_terms);
    }
    stack.push_back(f->a.get());
    stack.push_back(f->b.get());
  }
  return use;
}

}  // namespace

void validate(const FormulaPtr& f, const Signature& sig) {
  SymbolUse use = scan(f);
  if (sig.kind == Signature::Kind::BooleanAlgebra) {
    if (use.sim) throw SignatureError("'∼' is not in the Boolean-algebra signature");
    if (use.rel_constants) throw SignatureError("c0/c1 are not in the Boolean-algebra signature");
    if (!use.preds.empty()) {
      throw SignatureError("predicate '" + *use.preds.begin() + "' is not in the Boolean-algebra signature");
    }
    return;
  }
  if (use.eq) throw SignatureError("'≈' is not in the relational signature");
  if (use.boolean_terms) throw SignatureError("Boolean operations are not in the relational signature");
  if (use.rel_constants && !sig.constants) throw SignatureError("constants c0/c1 are not declared");
  for (const auto& p : use.preds) {
    if (p != sig.predicate) throw SignatureError("predicate '" + p + "' is not declared");
  }
}

Signature infer_signature(const FormulaPtr& f) {
  SymbolUse use = scan(f);
  bool boolean_side = use.eq || use.boolean_terms;
  bool relational_side = use.sim || use.rel_constants || !use.preds.empty();
  if (boolean_side && relational_side) {
    throw SignatureError("formula mixes Boolean-algebra and relational symbols");
  }
  if (!relational_side) return Signature::boolean();
  if (use.preds.size() > 1) throw SignatureError("more than one predicate symbol");
  return Signature::relational(use.rel_constants, use.preds.empty() ? std::string{} : *use.preds.begin());
}

}  // namespace tm2qbf
