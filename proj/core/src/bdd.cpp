#include <cstdlib>
#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

#include "clock.hpp"
#include "tm2qbf/qbf.hpp"

namespace tm2qbf {

namespace {

using detail::BudgetHit;
using detail::Clock;

// Reduced ordered BDDs without complement edges. Node 0 is false, node 1 true.
class Bdd {
 public:
  static constexpr std::uint32_t kTerminal = std::numeric_limits<std::uint32_t>::max();

  Bdd(Clock& clock, std::size_t max_nodes) : clock_(clock), max_nodes_(max_nodes) {
    nodes_.push_back({kTerminal, 0, 0});
    nodes_.push_back({kTerminal, 1, 1});
    unique_.assign(kInitialUnique, 0);
    cache_.assign(4 * kInitialUnique, {});
  }

  std::uint32_t var(std::uint32_t level) { return mk(level, 0, 1); }

  std::uint32_t neg(std::uint32_t f) {
    if (f < 2) return 1 - f;
    if (auto r = lookup(kNot, f, 0)) return *r;
    const Node n = nodes_[f];
    std::uint32_t r = mk(n.level, neg(n.lo), neg(n.hi));
    store(kNot, f, 0, r);
    return r;
  }

  std::uint32_t apply(bool conj, std::uint32_t f, std::uint32_t g) {
    if (conj) {
      if (f == 0 || g == 0) return 0;
      if (f == 1) return g;
      if (g == 1 || f == g) return f;
    } else {
      if (f == 1 || g == 1) return 1;
      if (f == 0) return g;
      if (g == 0 || f == g) return f;
    }
    if (f > g) std::swap(f, g);
    const std::uint32_t op = conj ? kAnd : kOr;
    if (auto r = lookup(op, f, g)) return *r;
    const Node a = nodes_[f];
    const Node b = nodes_[g];
    std::uint32_t level = std::min(a.level, b.level);
    std::uint32_t lo = apply(conj, a.level == level ? a.lo : f, b.level == level ? b.lo : g);
    std::uint32_t hi = apply(conj, a.level == level ? a.hi : f, b.level == level ? b.hi : g);
    std::uint32_t r = mk(level, lo, hi);
    store(op, f, g, r);
    return r;
  }

  // ∃ (universal=false) or ∀ over the marked levels.
  std::uint32_t quantify(std::uint32_t f, const std::vector<char>& levels, std::uint32_t max_level,
                         bool universal) {
    quant_op_ = next_quant_op_;
    next_quant_op_ += 1;
    if (next_quant_op_ == 0) next_quant_op_ = kFirstQuant;
    return quant(f, levels, max_level, universal);
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    std::uint32_t level, lo, hi;
  };
  struct Entry {
    std::uint32_t op = 0, a = 0, b = 0, r = 0;
  };

  static constexpr std::uint32_t kNot = 1, kAnd = 2, kOr = 3, kFirstQuant = 16;
  static constexpr std::size_t kInitialUnique = 1u << 12;
  static constexpr std::size_t kMaxCache = 1u << 22;

  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
  }

  std::optional<std::uint32_t> lookup(std::uint32_t op, std::uint32_t a, std::uint32_t b) const {
    const Entry& e = cache_[slot(op, a, b)];
    if (e.op == op && e.a == a && e.b == b) return e.r;
    return std::nullopt;
  }

  void store(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t r) {
    cache_[slot(op, a, b)] = {op, a, b, r};
  }

  std::size_t slot(std::uint32_t op, std::uint32_t a, std::uint32_t b) const {
    return mix((static_cast<std::uint64_t>(a) << 32 | b) ^ (static_cast<std::uint64_t>(op) << 58) ^ op) &
           (cache_.size() - 1);
  }

  std::uint32_t quant(std::uint32_t f, const std::vector<char>& levels, std::uint32_t max_level,
                      bool universal) {
    if (f < 2) return f;
    const Node n = nodes_[f];
    if (n.level > max_level) return f;
    if (auto r = lookup(quant_op_, f, 0)) return *r;
    std::uint32_t lo = quant(n.lo, levels, max_level, universal);
    std::uint32_t hi = quant(n.hi, levels, max_level, universal);
    std::uint32_t r = levels[n.level] ? apply(universal, lo, hi) : mk(n.level, lo, hi);
    store(quant_op_, f, 0, r);
    return r;
  }

  std::uint32_t mk(std::uint32_t level, std::uint32_t lo, std::uint32_t hi) {
    if (lo == hi) return lo;
    std::size_t mask = unique_.size() - 1;
    std::size_t h = mix(static_cast<std::uint64_t>(level) * 0x9E3779B97F4A7C15ULL ^
                        (static_cast<std::uint64_t>(lo) << 32 | hi)) & mask;
    for (;;) {
      std::uint32_t id = unique_[h];
      if (id == 0) break;
      const Node& n = nodes_[id];
      if (n.level == level && n.lo == lo && n.hi == hi) return id;
      h = (h + 1) & mask;
    }
    if (nodes_.size() >= max_nodes_) throw BudgetHit{};
    clock_.tick();
    nodes_.push_back({level, lo, hi});
    auto id = static_cast<std::uint32_t>(nodes_.size() - 1);
    unique_[h] = id;
    if (nodes_.size() * 2 > unique_.size()) rehash();
    return id;
  }

  void rehash() {
    std::vector<std::uint32_t> table(unique_.size() * 2, 0);
    std::size_t mask = table.size() - 1;
    for (std::uint32_t id = 2; id < nodes_.size(); ++id) {
      const Node& n = nodes_[id];
      std::size_t h = mix(static_cast<std::uint64_t>(n.level) * 0x9E3779B97F4A7C15ULL ^
                          (static_cast<std::uint64_t>(n.lo) << 32 | n.hi)) & mask;
      while (table[h] != 0) h = (h + 1) & mask;
      table[h] = id;
    }
    unique_.swap(table);
    const std::size_t want = std::min(4 * unique_.size(), kMaxCache);
    if (cache_.size() < want) cache_.assign(want, {});
  }

  Clock& clock_;
  std::size_t max_nodes_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> unique_;
  std::vector<Entry> cache_;
  std::uint32_t quant_op_ = kFirstQuant;
  std::uint32_t next_quant_op_ = kFirstQuant;
};

class CircuitBdd {
 public:
  CircuitBdd(const Circuit& c, Bdd& bdd) : c_(c), bdd_(bdd), result_(c.size() + 1, kUnset), level_(c.size() + 1, 0) {
    std::uint32_t next = 0;
    for (int id = 1; id <= static_cast<int>(c.size()); ++id) {
      if (c.at(id).op == Circuit::Op::Input) level_[id] = next++;
    }
    levels_ = next;
  }

  std::uint32_t literal(int l) {
    std::uint32_t r = gate(std::abs(l));
    return l < 0 ? bdd_.neg(r) : r;
  }

 private:
  static constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t gate(int id) {
    if (result_[id] != kUnset) return result_[id];
    const auto& g = c_.at(id);
    std::uint32_t r = 0;
    switch (g.op) {
      case Circuit::Op::Input: r = bdd_.var(level_[id]); break;
      case Circuit::Op::And:
      case Circuit::Op::Or: {
        bool conj = g.op == Circuit::Op::And;
        r = conj ? 1 : 0;
        for (int l : g.inputs) r = bdd_.apply(conj, r, literal(l));
        break;
      }
      case Circuit::Op::ForAll:
      case Circuit::Op::Exists: {
        std::vector<char> marks(levels_, 0);
        std::uint32_t max_level = 0;
        for (int b : g.bound) {
          marks[level_[b]] = 1;
          max_level = std::max(max_level, level_[b]);
        }
        r = bdd_.quantify(literal(g.inputs.at(0)), marks, max_level, g.op == Circuit::Op::ForAll);
        break;
      }
    }
    result_[id] = r;
    return r;
  }

  const Circuit& c_;
  Bdd& bdd_;
  std::vector<std::uint32_t> result_;
  std::vector<std::uint32_t> level_;
  std::uint32_t levels_ = 0;
};

// Without an explicit node budget the table is capped to keep memory bounded.
constexpr std::size_t kDefaultMaxNodes = 40'000'000;

}  // namespace

EvalResult solve_bdd(const Circuit& c, const Budget& budget) {
  Clock clock(Budget{budget.time, 0});
  EvalResult result;
  std::size_t max_nodes = budget.nodes != 0 ? static_cast<std::size_t>(budget.nodes) : kDefaultMaxNodes;
  try {
    Bdd bdd(clock, max_nodes);
    CircuitBdd eval(c, bdd);
    std::uint32_t r = eval.literal(c.output);
    if (r > 1) throw EvaluationError("circuit has unbound inputs");
    result.verdict = r == 1 ? Verdict::True : Verdict::False;
    result.nodes = bdd.size();
  } catch (const BudgetHit&) {
    result.verdict = Verdict::BudgetExceeded;
    result.nodes = clock.nodes();
  }
  result.ms = clock.elapsed_ms();
  return result;
}

}  // namespace tm2qbf
