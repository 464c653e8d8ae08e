#include "tm2qbf/evaluator.hpp"

#include <cstring>
#include <string>
#include <unordered_map>
#include <vector>

#include "clock.hpp"
#include "compiled.hpp"
#include "tm2qbf/qbf.hpp"
#include "tm2qbf/substitution.hpp"

namespace tm2qbf {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Naive: return "naive";
    case Strategy::ShortCircuit: return "short-circuit";
    case Strategy::Guarded: return "guarded";
    case Strategy::QbfSearch: return "qbf-search";
    case Strategy::Symbolic: return "symbolic";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (auto s : {Strategy::Naive, Strategy::ShortCircuit, Strategy::Guarded, Strategy::QbfSearch,
                 Strategy::Symbolic}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::False: return "false";
    case Verdict::True: return "true";
    case Verdict::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

bool eval_term(const TermPtr& t, const Assignment& a) {
  switch (t->kind) {
    case TermKind::Zero: return false;
    case TermKind::One: return true;
    case TermKind::Var: {
      auto it = a.find(t->var);
      if (it == a.end()) throw EvaluationError("unassigned variable " + to_string(t->var));
      return it->second;
    }
    case TermKind::Complement: return !eval_term(t->a, a);
    case TermKind::Meet: return eval_term(t->a, a) && eval_term(t->b, a);
    case TermKind::Join: return eval_term(t->a, a) || eval_term(t->b, a);
    case TermKind::C0:
    case TermKind::C1: break;
  }
  throw EvaluationError("relational constant in a Boolean-algebra term");
}

namespace {

using detail::BudgetHit;
using detail::Clock;
using detail::CNode;
using detail::Compiled;
using detail::CTerm;

struct Features {
  bool peek = false;
  bool memo = false;
  bool guards = false;
};

// Values are 0, 1 or -1 (unknown). Look-ahead ("peek") evaluates three-valued
// under the current partial assignment; a definite answer there holds for
// every completion, which is what licenses pruning.
class Engine {
 public:
  Engine(const Compiled& c, Features features, unsigned peek_bits, Clock& clock)
      : c_(c), f_(features), peek_bits_(peek_bits), clock_(clock),
        val_(c.slot_vars.size(), -1), alias_(c.slot_vars.size(), -1),
        owner_(c.slot_vars.size(), UINT32_MAX) {
    for (std::uint32_t id = 0; id < c.nodes.size(); ++id) {
      for (std::uint32_t s : c.nodes[id].block) owner_[s] = id;
    }
  }

  bool run() { return ev(c_.root, false, 0) == 1; }

 private:
  static constexpr std::size_t kMemoCap = 1u << 22;

  std::uint32_t root(std::uint32_t s) const {
    while (alias_[s] >= 0) s = static_cast<std::uint32_t>(alias_[s]);
    return s;
  }

  bool unbound(std::uint32_t s) const { return val_[s] < 0 && alias_[s] < 0; }

  int term(std::uint32_t id) const {
    const CTerm& t = c_.terms[id];
    switch (t.kind) {
      case TermKind::Zero: return 0;
      case TermKind::One: return 1;
      case TermKind::Var: return val_[root(t.slot)];
      case TermKind::Complement: {
        int v = term(t.a);
        return v < 0 ? -1 : 1 - v;
      }
      case TermKind::Meet: {
        int x = term(t.a);
        if (x == 0) return 0;
        int y = term(t.b);
        if (y == 0) return 0;
        return x == 1 && y == 1 ? 1 : -1;
      }
      case TermKind::Join: {
        int x = term(t.a);
        if (x == 1) return 1;
        int y = term(t.b);
        if (y == 1) return 1;
        return x == 0 && y == 0 ? 0 : -1;
      }
      default:
        throw EvaluationError("relational constant in a Boolean-algebra term");
    }
  }

  int atom(const CNode& n) const {
    const CTerm& l = c_.terms[n.a];
    const CTerm& r = c_.terms[n.b];
    if (l.kind == TermKind::Var && r.kind == TermKind::Var && root(l.slot) == root(r.slot)) return 1;
    int x = term(n.a);
    if (x < 0) return -1;
    int y = term(n.b);
    if (y < 0) return -1;
    return x == y ? 1 : 0;
  }

  // peek=false requires every free variable of `id` to be determined.
  int ev(std::uint32_t id, bool peek, unsigned budget) {
    const CNode& n = c_.nodes[id];
    switch (n.kind) {
      case FormulaKind::Eq: return atom(n);
      case FormulaKind::Not: {
        int v = ev(n.a, peek, budget);
        return v < 0 ? -1 : 1 - v;
      }
      case FormulaKind::And: {
        int x = ev(n.a, peek, budget);
        if (x == 0) return 0;
        int y = ev(n.b, peek, budget);
        if (y == 0) return 0;
        return x == 1 && y == 1 ? 1 : -1;
      }
      case FormulaKind::Or: {
        int x = ev(n.a, peek, budget);
        if (x == 1) return 1;
        int y = ev(n.b, peek, budget);
        if (y == 1) return 1;
        return x == 0 && y == 0 ? 0 : -1;
      }
      case FormulaKind::Implies: {
        int x = ev(n.a, peek, budget);
        if (x == 0) return 1;
        int y = ev(n.b, peek, budget);
        if (y == 1) return 1;
        return x == 1 && y == 0 ? 0 : -1;
      }
      case FormulaKind::ForAll:
      case FormulaKind::Exists:
        return peek ? quant_peek(id, budget) : quant(id);
      default:
        throw EvaluationError("relational atom in a Boolean-algebra sentence");
    }
  }

  bool determined(const CNode& n) const {
    for (std::uint32_t s : n.free) {
      if (val_[root(s)] < 0) return false;
    }
    return true;
  }

  std::string memo_key(std::uint32_t id, const CNode& n) const {
    std::string key(sizeof id + (n.free.size() + 7) / 8, '\0');
    std::memcpy(key.data(), &id, sizeof id);
    for (std::size_t i = 0; i < n.free.size(); ++i) {
      if (val_[root(n.free[i])] == 1) key[sizeof id + i / 8] |= static_cast<char>(1u << (i % 8));
    }
    return key;
  }

  int quant(std::uint32_t id) {
    const CNode& n = c_.nodes[id];
    std::string key;
    if (f_.memo) {
      key = memo_key(id, n);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    int r = f_.guards && !n.cases.empty() ? guarded(id) : search(id, n.block, 0);
    if (f_.memo) {
      if (memo_.size() >= kMemoCap) memo_.clear();
      memo_.emplace(std::move(key), static_cast<std::int8_t>(r));
    }
    return r;
  }

  int search(std::uint32_t id, const std::vector<std::uint32_t>& slots, std::size_t i) {
    const CNode& n = c_.nodes[id];
    if (i == slots.size()) return ev(n.a, false, 0);
    const bool forall = n.kind == FormulaKind::ForAll;
    const std::uint32_t s = slots[i];
    int result = forall ? 1 : 0;
    for (int bit = 0; bit < 2; ++bit) {
      clock_.tick();
      val_[s] = static_cast<std::int8_t>(bit);
      int r = -1;
      if (f_.peek && i + 1 < slots.size()) r = ev(n.a, true, peek_bits_);
      if (r < 0) r = search(id, slots, i + 1);
      if (r != result) {
        result = r;
        break;
      }
    }
    val_[s] = -1;
    return result;
  }

  // Binds block variables of quantifier `id` from the equations of one guard
  // case. Returns false when the case is contradictory under the bindings.
  bool bind_case(std::uint32_t id, const std::vector<std::uint32_t>& atoms,
                 std::vector<std::uint32_t>& bound) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::uint32_t a : atoms) {
        const CNode& an = c_.nodes[a];
        for (int side = 0; side < 2; ++side) {
          const CTerm& x = c_.terms[side == 0 ? an.a : an.b];
          std::uint32_t other = side == 0 ? an.b : an.a;
          if (x.kind != TermKind::Var || owner_[x.slot] != id || !unbound(x.slot)) continue;
          const CTerm& t = c_.terms[other];
          if (t.kind == TermKind::Var) {
            std::uint32_t target = root(t.slot);
            if (target == x.slot || (owner_[target] == id && unbound(target))) continue;
            alias_[x.slot] = static_cast<std::int32_t>(target);
          } else {
            int v = term(other);
            if (v < 0) continue;
            val_[x.slot] = static_cast<std::int8_t>(v);
          }
          bound.push_back(x.slot);
          changed = true;
          break;
        }
      }
    }
    for (std::uint32_t a : atoms) {
      if (atom(c_.nodes[a]) == 0) return false;
    }
    return true;
  }

  void unbind(const std::vector<std::uint32_t>& bound) {
    for (std::uint32_t s : bound) {
      val_[s] = -1;
      alias_[s] = -1;
    }
  }

  std::vector<std::uint32_t> rest_of(const CNode& n) const {
    std::vector<std::uint32_t> rest;
    for (std::uint32_t s : n.block) {
      if (unbound(s)) rest.push_back(s);
    }
    return rest;
  }

  // Every block point satisfying the guard lies in some case, at the values
  // the case's equations force, and points outside the guard cannot change a
  // ∀ over → or an ∃ over ∧. So the original body is evaluated only at the
  // bound points of each case.
  int guarded(std::uint32_t id) {
    const CNode& n = c_.nodes[id];
    const int decisive = n.kind == FormulaKind::ForAll ? 0 : 1;
    for (const auto& atoms : n.cases) {
      clock_.tick();
      std::vector<std::uint32_t> bound;
      int r = 1 - decisive;
      if (bind_case(id, atoms, bound)) r = search(id, rest_of(n), 0);
      unbind(bound);
      if (r == decisive) return decisive;
    }
    return 1 - decisive;
  }

  int quant_peek(std::uint32_t id, unsigned budget) {
    const CNode& n = c_.nodes[id];
    if (f_.memo && determined(n)) return quant(id);
    int v = ev(n.a, true, budget);
    if (v >= 0) return v;
    const int decisive = n.kind == FormulaKind::ForAll ? 0 : 1;
    if (f_.guards && !n.cases.empty()) {
      bool unknown = false;
      for (const auto& atoms : n.cases) {
        std::vector<std::uint32_t> bound;
        int r = 1 - decisive;
        if (bind_case(id, atoms, bound)) {
          auto rest = rest_of(n);
          r = rest.size() <= budget ? enumerate(id, rest, budget - static_cast<unsigned>(rest.size())) : -1;
        }
        unbind(bound);
        if (r == decisive) return decisive;
        if (r < 0) unknown = true;
      }
      return unknown ? -1 : 1 - decisive;
    }
    if (n.block.size() > budget) return -1;
    return enumerate(id, n.block, budget - static_cast<unsigned>(n.block.size()));
  }

  // Three-valued evaluation of the body at every point of `slots`.
  int enumerate(std::uint32_t id, const std::vector<std::uint32_t>& slots, unsigned budget) {
    const CNode& n = c_.nodes[id];
    const int decisive = n.kind == FormulaKind::ForAll ? 0 : 1;
    const std::uint64_t points = std::uint64_t{1} << slots.size();
    bool unknown = false;
    int result = 1 - decisive;
    for (std::uint64_t p = 0; p < points; ++p) {
      clock_.tick();
      for (std::size_t i = 0; i < slots.size(); ++i) {
        val_[slots[i]] = static_cast<std::int8_t>((p >> (slots.size() - 1 - i)) & 1);
      }
      int r = ev(n.a, true, budget);
      if (r == decisive) {
        result = decisive;
        unknown = false;
        break;
      }
      if (r < 0) unknown = true;
    }
    for (std::uint32_t s : slots) val_[s] = -1;
    return unknown ? -1 : result;
  }

  const Compiled& c_;
  Features f_;
  unsigned peek_bits_;
  Clock& clock_;
  std::vector<std::int8_t> val_;
  std::vector<std::int32_t> alias_;
  std::vector<std::uint32_t> owner_;
  std::unordered_map<std::string, std::int8_t> memo_;
};

void require_sentence(const FormulaPtr& f) {
  try {
    validate(f, Signature::boolean());
  } catch (const SignatureError& e) {
    throw EvaluationError(e.what());
  }
  if (!is_closed(f)) throw EvaluationError("sentence has free variables");
}

}  // namespace

EvalResult eval_sentence(const FormulaPtr& f, const EvalOptions& opts) {
  require_sentence(f);
  Clock clock(opts.budget);
  EvalResult result;
  try {
    switch (opts.strategy) {
      case Strategy::Naive:
      case Strategy::ShortCircuit:
      case Strategy::Guarded: {
        Features features;
        detail::CompileOptions copts;
        FormulaPtr g = f;
        if (opts.strategy != Strategy::Naive) {
          features.peek = true;
          features.memo = true;
        }
        if (opts.strategy == Strategy::Guarded) {
          features.guards = true;
          copts.guard_cases = true;
          g = detail::hoist_guards(f);
        }
        Compiled c = detail::compile(g, copts);
        Engine engine(c, features, opts.peek_bits, clock);
        result.verdict = engine.run() ? Verdict::True : Verdict::False;
        result.nodes = clock.nodes();
        break;
      }
      case Strategy::QbfSearch: {
        result = solve_qdimacs(to_qdimacs(to_circuit(f, opts.order)), opts.budget);
        break;
      }
      case Strategy::Symbolic:
        result = solve_bdd(to_circuit(f, opts.order), opts.budget);
        break;
    }
  } catch (const BudgetHit&) {
    result.verdict = Verdict::BudgetExceeded;
    result.nodes = clock.nodes();
  }
  result.ms = clock.elapsed_ms();
  return result;
}

EvalResult eval_formula(const FormulaPtr& f, const Assignment& env, const EvalOptions& opts) {
  Substitution s;
  for (const auto& v : free_vars(f)) {
    auto it = env.find(v);
    if (it == env.end()) throw EvaluationError("unassigned variable " + to_string(v));
    s.add(v, term::constant(it->second));
  }
  return eval_sentence(substitute(f, s), opts);
}

}  // namespace tm2qbf
