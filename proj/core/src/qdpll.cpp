#include <algorithm>
#include <cstdlib>
#include <vector>

#include "clock.hpp"
#include "tm2qbf/qbf.hpp"

namespace tm2qbf {

namespace {

using detail::BudgetHit;
using detail::Clock;

// Decision search in prefix order with unit propagation under universal
// reduction: a clause without unassigned existential literals whose other
// literals are false is a conflict; a clause whose only unassigned
// existential literal e precedes all its unassigned universal literals in
// the prefix forces e.
class Qdpll {
 public:
  Qdpll(const Qdimacs& q, Clock& clock) : clock_(clock) {
    const std::size_t n = static_cast<std::size_t>(q.num_vars) + 1;
    level_.assign(n, 0);
    universal_.assign(n, 0);
    val_.assign(n, -1);
    int level = 0;
    for (const auto& [univ, vars] : q.prefix) {
      ++level;
      for (int v : vars) {
        level_[v] = level;
        universal_[v] = univ;
        order_.push_back(v);
      }
    }
    // Unquantified variables are existential in an outermost block.
    std::vector<char> seen(n, 0);
    for (int v : order_) seen[v] = 1;
    std::vector<int> free;
    for (int v = 1; v < static_cast<int>(n); ++v) {
      if (!seen[v]) free.push_back(v);
    }
    order_.insert(order_.begin(), free.begin(), free.end());

    // Universal reduction would empty a clause holding u and ¬u, so
    // tautologies are dropped and repeated literals merged up front.
    for (const auto& clause : q.clauses) {
      std::vector<int> c = clause;
      std::sort(c.begin(), c.end(), [](int a, int b) { return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b; });
      c.erase(std::unique(c.begin(), c.end()), c.end());
      bool tautology = false;
      for (std::size_t i = 0; i + 1 < c.size(); ++i) tautology |= c[i] == -c[i + 1];
      if (!tautology) clauses_.push_back(std::move(c));
    }
    occ_.assign(2 * n, {});
    true_count_.assign(clauses_.size(), 0);
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      for (int l : clauses_[i]) occ_[index(l)].push_back(i);
    }
  }

  bool solve() {
    for (const auto& c : clauses_) {
      if (c.empty()) return false;
    }
    return search(0);
  }

 private:
  std::size_t index(int lit) const { return 2 * static_cast<std::size_t>(std::abs(lit)) + (lit < 0); }

  int value(int lit) const {
    int v = val_[std::abs(lit)];
    if (v < 0) return -1;
    return lit > 0 ? v : 1 - v;
  }

  void assign(int lit) {
    int v = std::abs(lit);
    val_[v] = lit > 0 ? 1 : 0;
    trail_.push_back(v);
    for (std::size_t c : occ_[index(lit)]) {
      if (true_count_[c]++ == 0) ++satisfied_;
    }
    dirty_.insert(dirty_.end(), occ_[index(-lit)].begin(), occ_[index(-lit)].end());
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      int v = trail_.back();
      trail_.pop_back();
      int lit = val_[v] == 1 ? v : -v;
      for (std::size_t c : occ_[index(lit)]) {
        if (--true_count_[c] == 0) --satisfied_;
      }
      val_[v] = -1;
    }
    dirty_.clear();
  }

  // Returns false on conflict.
  bool propagate(bool all) {
    if (all) {
      dirty_.clear();
      for (std::size_t i = 0; i < clauses_.size(); ++i) dirty_.push_back(i);
    }
    while (!dirty_.empty()) {
      std::size_t c = dirty_.back();
      dirty_.pop_back();
      if (true_count_[c] > 0) continue;
      int exist = 0, exist_count = 0, min_univ_level = 1 << 30;
      for (int l : clauses_[c]) {
        int v = std::abs(l);
        if (val_[v] >= 0) continue;
        if (universal_[v]) {
          min_univ_level = std::min(min_univ_level, level_[v]);
        } else {
          ++exist_count;
          exist = l;
        }
      }
      if (exist_count == 0) return false;
      if (exist_count == 1 && level_[std::abs(exist)] < min_univ_level) {
        clock_.tick();
        assign(exist);
      }
    }
    return true;
  }

  bool search(std::size_t from) {
    std::size_t mark = trail_.size();
    bool ok = propagate(from == 0);
    if (!ok) {
      undo(mark);
      return false;
    }
    if (satisfied_ == clauses_.size()) {
      undo(mark);
      return true;
    }
    std::size_t i = from;
    while (i < order_.size() && val_[order_[i]] >= 0) ++i;
    if (i == order_.size()) {
      undo(mark);
      return false;
    }
    int v = order_[i];
    bool univ = universal_[v];
    bool result = !univ;
    for (int phase : {-1, 1}) {
      clock_.tick();
      std::size_t inner = trail_.size();
      assign(phase * v);
      bool r = search(i + 1);
      undo(inner);
      if (r != univ) {
        result = r;
        break;
      }
      result = r;
    }
    undo(mark);
    return result;
  }

  Clock& clock_;
  std::vector<std::vector<int>> clauses_;
  std::vector<int> level_;
  std::vector<char> universal_;
  std::vector<int> val_;
  std::vector<int> order_;
  std::vector<std::vector<std::size_t>> occ_;
  std::vector<std::size_t> true_count_;
  std::size_t satisfied_ = 0;
  std::vector<int> trail_;
  std::vector<std::size_t> dirty_;
};

}  // namespace

EvalResult solve_qdimacs(const Qdimacs& q, const Budget& budget) {
  Clock clock(budget);
  EvalResult result;
  try {
    result.verdict = Qdpll(q, clock).solve() ? Verdict::True : Verdict::False;
  } catch (const BudgetHit&) {
    result.verdict = Verdict::BudgetExceeded;
  }
  result.nodes = clock.nodes();
  result.ms = clock.elapsed_ms();
  return result;
}

}  // namespace tm2qbf
