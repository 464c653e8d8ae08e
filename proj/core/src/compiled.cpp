#include "compiled.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <unordered_map>

namespace tm2qbf::detail {

namespace {

struct PtrCtxHash {
  std::size_t operator()(const std::pair<const void*, std::uint32_t>& k) const noexcept {
    return std::hash<const void*>{}(k.first) ^ (static_cast<std::size_t>(k.second) * 0x9E3779B97F4A7C15ULL);
  }
};

class Compiler {
 public:
  explicit Compiler(const CompileOptions& opts) : opts_(opts) {}

  Compiled run(const FormulaPtr& f) {
    // Root context: free variables get slots on demand.
    contexts_.push_back({});
    out_.root = node(f, 0);
    out_.free_slots = out_.nodes[out_.root].free;
    return std::move(out_);
  }

 private:
  struct Context {
    std::map<VarId, std::uint32_t> slots;
  };

  std::uint32_t slot_of(const VarId& v, std::uint32_t ctx) {
    auto& c = contexts_[ctx];
    if (auto it = c.slots.find(v); it != c.slots.end()) return it->second;
    // Unbound here: it is free in the whole formula, so it lives in the root context.
    auto& root = contexts_[0];
    if (auto it = root.slots.find(v); it != root.slots.end()) return it->second;
    std::uint32_t s = new_slot(v);
    root.slots.emplace(v, s);
    return s;
  }

  std::uint32_t new_slot(const VarId& v) {
    out_.slot_vars.push_back(v);
    return static_cast<std::uint32_t>(out_.slot_vars.size() - 1);
  }

  std::uint32_t term(const TermPtr& t, std::uint32_t ctx, std::vector<std::uint32_t>& free) {
    auto key = std::make_pair(static_cast<const void*>(t.get()), ctx);
    if (auto it = term_memo_.find(key); it != term_memo_.end()) {
      const auto& fs = term_free_[it->second];
      free.insert(free.end(), fs.begin(), fs.end());
      return it->second;
    }
    CTerm ct;
    ct.kind = t->kind;
    std::vector<std::uint32_t> fs;
    switch (t->kind) {
      case TermKind::Var:
        ct.slot = slot_of(t->var, ctx);
        fs.push_back(ct.slot);
        break;
      case TermKind::Complement:
        ct.a = term(t->a, ctx, fs);
        break;
      case TermKind::Meet:
      case TermKind::Join:
        ct.a = term(t->a, ctx, fs);
        ct.b = term(t->b, ctx, fs);
        break;
      default:
        break;
    }
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    out_.terms.push_back(ct);
    auto id = static_cast<std::uint32_t>(out_.terms.size() - 1);
    term_free_.push_back(fs);
    term_memo_.emplace(key, id);
    free.insert(free.end(), fs.begin(), fs.end());
    return id;
  }

  static void merge_into(std::vector<std::uint32_t>& dst, const std::vector<std::uint32_t>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
  }

  static void normalize_set(std::vector<std::uint32_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  std::uint32_t node(const FormulaPtr& f, std::uint32_t ctx) {
    auto key = std::make_pair(static_cast<const void*>(f.get()), ctx);
    if (auto it = node_memo_.find(key); it != node_memo_.end()) return it->second;
    CNode n;
    n.kind = f->kind;
    switch (f->kind) {
      case FormulaKind::Eq:
      case FormulaKind::Sim:
      case FormulaKind::Pred:
        n.a = term(f->lhs, ctx, n.free);
        n.b = term(f->rhs, ctx, n.free);
        break;
      case FormulaKind::Not:
        n.a = node(f->a, ctx);
        n.free = out_.nodes[n.a].free;
        n.has_quantifier = out_.nodes[n.a].has_quantifier;
        break;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies:
        n.a = node(f->a, ctx);
        n.b = node(f->b, ctx);
        n.free = out_.nodes[n.a].free;
        merge_into(n.free, out_.nodes[n.b].free);
        n.has_quantifier = out_.nodes[n.a].has_quantifier || out_.nodes[n.b].has_quantifier;
        break;
      case FormulaKind::ForAll:
      case FormulaKind::Exists: {
        Context inner = contexts_[ctx];
        for (const auto& v : f->vars) {
          std::uint32_t s = new_slot(v);
          inner.slots[v] = s;
          n.block.push_back(s);
        }
        contexts_.push_back(std::move(inner));
        auto inner_id = static_cast<std::uint32_t>(contexts_.size() - 1);
        n.a = node(f->a, inner_id);
        n.has_quantifier = true;
        for (std::uint32_t s : out_.nodes[n.a].free) {
          if (std::find(n.block.begin(), n.block.end(), s) == n.block.end()) n.free.push_back(s);
        }
        if (opts_.guard_cases) n.cases = guard_cases(n);
        break;
      }
    }
    normalize_set(n.free);
    out_.nodes.push_back(std::move(n));
    auto id = static_cast<std::uint32_t>(out_.nodes.size() - 1);
    node_memo_.emplace(key, id);
    return id;
  }

  // Disjunctive normal form of the conjunction/disjunction skeleton of a
  // guard; other subformulas are opaque. Only Eq atoms are kept in the cases,
  // since only they can bind variables. Returns false past the case limit.
  bool dnf(std::uint32_t id, std::vector<std::vector<std::uint32_t>>& out) {
    const CNode& n = out_.nodes[id];
    if (n.kind == FormulaKind::And) {
      std::vector<std::vector<std::uint32_t>> left, right;
      if (!dnf(n.a, left) || !dnf(n.b, right)) return false;
      if (left.size() * right.size() > opts_.max_cases) return false;
      out.clear();
      for (const auto& l : left) {
        for (const auto& r : right) {
          auto c = l;
          c.insert(c.end(), r.begin(), r.end());
          out.push_back(std::move(c));
        }
      }
      return true;
    }
    if (n.kind == FormulaKind::Or) {
      std::vector<std::vector<std::uint32_t>> left, right;
      if (!dnf(n.a, left) || !dnf(n.b, right)) return false;
      if (left.size() + right.size() > opts_.max_cases) return false;
      out = std::move(left);
      out.insert(out.end(), right.begin(), right.end());
      return true;
    }
    out.assign(1, {});
    if (n.kind == FormulaKind::Eq) out[0].push_back(id);
    return true;
  }

  std::vector<std::vector<std::uint32_t>> guard_cases(const CNode& q) {
    const CNode& body = out_.nodes[q.a];
    std::uint32_t guard;
    if (q.kind == FormulaKind::ForAll && body.kind == FormulaKind::Implies) {
      guard = body.a;
    } else if (q.kind == FormulaKind::Exists && body.kind == FormulaKind::And) {
      guard = q.a;
    } else {
      return {};
    }
    std::vector<std::vector<std::uint32_t>> cases;
    if (!dnf(guard, cases)) return {};
    // A case is useful only if one of its atoms mentions a block variable
    // directly on one side.
    bool useful = false;
    for (const auto& c : cases) {
      for (std::uint32_t atom : c) {
        const CNode& an = out_.nodes[atom];
        for (std::uint32_t t : {an.a, an.b}) {
          const CTerm& ct = out_.terms[t];
          if (ct.kind == TermKind::Var &&
              std::find(q.block.begin(), q.block.end(), ct.slot) != q.block.end()) {
            useful = true;
          }
        }
      }
    }
    if (!useful) return {};
    return cases;
  }

  CompileOptions opts_;
  Compiled out_;
  std::vector<Context> contexts_;
  std::unordered_map<std::pair<const void*, std::uint32_t>, std::uint32_t, PtrCtxHash> term_memo_;
  std::vector<std::vector<std::uint32_t>> term_free_;
  std::unordered_map<std::pair<const void*, std::uint32_t>, std::uint32_t, PtrCtxHash> node_memo_;
};

class Hoister {
 public:
  FormulaPtr run(const FormulaPtr& f) {
    if (auto it = memo_.find(f.get()); it != memo_.end()) return it->second;
    FormulaPtr out;
    switch (f->kind) {
      case FormulaKind::Eq:
      case FormulaKind::Sim:
      case FormulaKind::Pred:
        out = f;
        break;
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
      case FormulaKind::Exists:
        out = quantifier(f->kind, f->vars, run(f->a));
        break;
    }
    memo_.emplace(f.get(), out);
    keep_.push_back(out);
    return out;
  }

 private:
  FormulaPtr quantifier(FormulaKind kind, const std::vector<VarId>& vars, const FormulaPtr& body) {
    VarSet bound(vars.begin(), vars.end());
    if (body->kind == FormulaKind::Implies) {
      std::vector<FormulaPtr> parts;
      flatten_and(body->a, parts);
      std::vector<FormulaPtr> out_parts, in_parts;
      for (const auto& p : parts) {
        const VarSet& fv = free_of(p);
        bool mentions = std::any_of(fv.begin(), fv.end(), [&](const VarId& v) { return bound.count(v) > 0; });
        (mentions ? in_parts : out_parts).push_back(p);
      }
      if (!out_parts.empty()) {
        FormulaPtr inner_body = in_parts.empty() ? body->b : fo::implies(fo::conj_all(in_parts), body->b);
        FormulaPtr inner = merge(kind, vars, inner_body);
        return fo::implies(fo::conj_all(out_parts), inner);
      }
    }
    return merge(kind, vars, body);
  }

  FormulaPtr merge(FormulaKind kind, const std::vector<VarId>& vars, const FormulaPtr& body) {
    if (body->kind == kind) {
      VarSet mine(vars.begin(), vars.end());
      bool clash = std::any_of(body->vars.begin(), body->vars.end(),
                               [&](const VarId& v) { return mine.count(v) > 0; });
      if (!clash) {
        std::vector<VarId> all = vars;
        all.insert(all.end(), body->vars.begin(), body->vars.end());
        return fo::quantifier(kind, std::move(all), body->a);
      }
    }
    return fo::quantifier(kind, vars, body);
  }

  static void flatten_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
    if (f->kind == FormulaKind::And) {
      flatten_and(f->a, out);
      flatten_and(f->b, out);
    } else {
      out.push_back(f);
    }
  }

  const VarSet& free_of(const FormulaPtr& f) {
    if (auto it = free_memo_.find(f.get()); it != free_memo_.end()) return it->second;
    keep_.push_back(f);
    return free_memo_.emplace(f.get(), free_vars(f)).first->second;
  }

  std::unordered_map<const Formula*, FormulaPtr> memo_;
  std::unordered_map<const Formula*, VarSet> free_memo_;
  std::vector<FormulaPtr> keep_;  // pins nodes whose addresses key the memos
};

}  // namespace

Compiled compile(const FormulaPtr& f, const CompileOptions& opts) { return Compiler(opts).run(f); }

FormulaPtr hoist_guards(const FormulaPtr& f) { return Hoister{}.run(f); }

}  // namespace tm2qbf::detail
