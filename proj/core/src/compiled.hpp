#pragma once

// Slot-indexed form of a formula for the search evaluators. Every quantifier
// occurrence gets fresh slots, so sibling or shadowing binders of the same
// variable never share storage.

#include <cstdint>
#include <vector>

#include "tm2qbf/formula.hpp"

namespace tm2qbf::detail {

struct CTerm {
  TermKind kind;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::uint32_t slot = 0;  // Var only
};

struct CNode {
  FormulaKind kind;
  std::uint32_t a = 0;  // child node, or lhs term for atoms
  std::uint32_t b = 0;  // child node, or rhs term for atoms
  std::vector<std::uint32_t> block;  // quantifier slots, in binding order
  std::vector<std::uint32_t> free;   // free slots, ascending
  // Guard cases for quantifier nodes: each case is a conjunction of Eq atom
  // nodes taken from the premise (∀ over →) or the body (∃ over ∧).
  std::vector<std::vector<std::uint32_t>> cases;
  bool has_quantifier = false;  // some quantifier at or below this node
};

struct Compiled {
  std::vector<CTerm> terms;
  std::vector<CNode> nodes;
  std::uint32_t root = 0;
  std::vector<VarId> slot_vars;   // original variable of every slot
  std::vector<std::uint32_t> free_slots;  // slots of the root's free variables
};

struct CompileOptions {
  bool guard_cases = false;
  std::size_t max_cases = 64;
};

Compiled compile(const FormulaPtr& f, const CompileOptions& opts);

// Moves premise conjuncts that do not mention a quantifier's variables out of
// it, Q X (P_out ∧ P_in → φ) ≡ P_out → Q X (P_in → φ), and merges directly
// nested quantifiers of the same kind into one block.
FormulaPtr hoist_guards(const FormulaPtr& f);

}  // namespace tm2qbf::detail
