#pragma once

// Natural-language rendering and its symbol-count length.
//
// Conventions: ¬, atoms and quantifiers bind tightest, then ∧, ∨, →. Chains of
// the same ∧ or ∨ need no parentheses; an operand of → that is itself an
// implication is parenthesized. A quantifier is written once per variable
// (∀x0,0∀x0,1...) and its body is parenthesized unless it binds tightly.
// In terms, ∩ binds tighter than ∪ and C takes a parenthesized compound
// operand. Variables render as kind, decimal group, comma, decimal bit.

#include <cstddef>
#include <string>

#include "tm2qbf/formula.hpp"

namespace tm2qbf {

std::string render_natural(const TermPtr& t);
std::string render_natural(const FormulaPtr& f);

// Number of symbols (code points) in render_natural(f), computed without
// materializing the string.
std::size_t length_natural(const FormulaPtr& f);
// Same, but every variable counts as a single symbol regardless of indices.
std::size_t length_natural_noidx(const FormulaPtr& f);

}  // namespace tm2qbf
