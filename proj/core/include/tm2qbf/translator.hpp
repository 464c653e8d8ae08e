#pragma once

// Rewrites Boolean-algebra sentences into relational signatures:
//   2.0  {∼, c0, c1}: relativize quantifiers to the classes of c0 and c1,
//        then eliminate C, ∪, ∩, 0, 1 atom by atom
//   2.1  {∼}: c0, c1 become fresh variables a, b under ∃a,b[¬a∼b ∧ ...]
//   2.2  any signature with a formula N(x, y) meaning "x and y differ":
//        every t∼s becomes ¬N(t, s) under ∃a,b[N(a, b) ∧ ...]
//
// Atom rules, applied to every matching atom once per pass until nothing
// changes (u below is never a constant):
//   (a) C(t)∼s, t∼C(s)  ↦ ¬ t∼s
//   (b) (t1∪t2)∼u        ↦ [(t1∼c1 ∨ t2∼c1) → u∼c1] ∧ [(t1∼c0 ∧ t2∼c0) → u∼c0]
//   (c) (t1∩t2)∼u        ↦ [(t1∼c0 ∨ t2∼c0) → u∼c0] ∧ [(t1∼c1 ∧ t2∼c1) → u∼c1]
// After the (a)-(c) fixpoint, 0 and 1 become c0 and c1, and the remaining
// atoms between a compound term and a constant are split:
//   (t1∪t2)∼c1 ↦ t1∼c1 ∨ t2∼c1     (t1∩t2)∼c1 ↦ t1∼c1 ∧ t2∼c1
//   (t1∪t2)∼c0 ↦ t1∼c0 ∧ t2∼c0     (t1∩t2)∼c0 ↦ t1∼c0 ∨ t2∼c0
// No other simplification is performed.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "tm2qbf/formula.hpp"

namespace tm2qbf {

class TranslationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TranslationStats {
  std::size_t passes = 0;
  std::vector<std::size_t> lengths;        // natural-language length after stage 1 and each pass
  std::vector<std::size_t> symbol_counts;  // boolean_symbol_count at the same points
  std::vector<std::string> warnings;
};

// Growth factor of a single pass above which a warning is recorded.
inline constexpr std::size_t kPassGrowthWarning = 5;

FormulaPtr relativize(const FormulaPtr& f);  // stage 1
// Number of occurrences of ∩, ∪, C, 0, 1 and ≈ in the tree form.
std::size_t boolean_symbol_count(const FormulaPtr& f);

FormulaPtr translate_20(const FormulaPtr& sentence, TranslationStats* stats = nullptr);
FormulaPtr translate_21(const FormulaPtr& sentence, TranslationStats* stats = nullptr);
// n_formula must have exactly two free variables; the smaller one (in
// variable order) plays x, the other y. Its bound variables are renamed apart.
FormulaPtr translate_22(const FormulaPtr& sentence, const FormulaPtr& n_formula,
                        TranslationStats* stats = nullptr);

// Fresh variables replacing c0 and c1 in translate_21.
std::pair<VarId, VarId> fresh_constant_vars(const FormulaPtr& f);

}  // namespace tm2qbf
