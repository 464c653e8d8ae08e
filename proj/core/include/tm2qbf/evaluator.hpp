#pragma once

// Truth of sentences over the two-element Boolean algebra.
//
// Strategies:
//   Naive         plain enumeration of every quantifier block
//   ShortCircuit  enumeration with three-valued look-ahead after every bit,
//                 premise-first connectives and memoized quantifier nodes
//   Guarded       ShortCircuit plus guard binding: in ∀X(P → φ) and ∃X(P ∧ φ)
//                 equations x ≈ t of P with t determined bind x instead of
//                 branching on it; disjunctive guards are split into cases
//   QbfSearch     prenex + Tseitin clausification, decided by QDPLL
//   Symbolic      gate-by-gate BDD construction with quantification

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tm2qbf/formula.hpp"

namespace tm2qbf {

enum class Strategy { Naive, ShortCircuit, Guarded, QbfSearch, Symbolic };

std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

// Zero means unlimited.
struct Budget {
  std::chrono::milliseconds time{0};
  std::uint64_t nodes = 0;
};

enum class Verdict { False, True, BudgetExceeded };

std::string_view to_string(Verdict v);

struct EvalResult {
  Verdict verdict = Verdict::BudgetExceeded;
  std::uint64_t nodes = 0;  // search nodes, or BDD nodes for Symbolic
  double ms = 0.0;

  bool finished() const { return verdict != Verdict::BudgetExceeded; }
  bool value() const { return verdict == Verdict::True; }
};

// Sort key for variables, used by Symbolic to order BDD levels and by the
// circuit export to number inputs. Ties keep first-occurrence order.
using VarOrderKey = std::function<std::uint64_t(const VarId&)>;

struct EvalOptions {
  Strategy strategy = Strategy::Guarded;
  Budget budget;
  VarOrderKey order;
  // Look-ahead enumerates nested quantifier blocks of up to this many bits.
  unsigned peek_bits = 10;
};

using Assignment = std::map<VarId, bool>;

class EvaluationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws EvaluationError on an unassigned variable or a relational constant.
bool eval_term(const TermPtr& t, const Assignment& a);

// Requires a closed Boolean-algebra sentence.
EvalResult eval_sentence(const FormulaPtr& f, const EvalOptions& opts = {});

// Substitutes the constants of `env` for the free variables, then evaluates.
// Every free variable must be assigned.
EvalResult eval_formula(const FormulaPtr& f, const Assignment& env, const EvalOptions& opts = {});

}  // namespace tm2qbf
