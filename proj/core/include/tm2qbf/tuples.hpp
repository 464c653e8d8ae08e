#pragma once

// Tuples of terms: equation systems, lexicographic comparison, and the
// increment/decrement term tuples. Bit 0 of a tuple is its most significant bit.

#include <cstddef>
#include <vector>

#include "tm2qbf/formula.hpp"

namespace tm2qbf {

using TermTuple = std::vector<TermPtr>;
using VarTuple = std::vector<VarId>;

VarTuple var_tuple(char kind, Index group, std::size_t width);
TermTuple as_terms(const VarTuple& vars);
// (value)_2 in `width` bits, most significant first. Throws if it does not fit.
TermTuple constant_tuple(Index value, std::size_t width);
std::vector<bool> to_bits(Index value, std::size_t width);
Index from_bits(const std::vector<bool>& bits);

// lhs_0 ≈ rhs_0 ∧ ... ∧ lhs_n ≈ rhs_n, left-associated.
FormulaPtr eq_tuple(const TermTuple& lhs, const TermTuple& rhs);
// x < y for single terms: x ≈ 0 ∧ y ≈ 1.
FormulaPtr bit_less(const TermPtr& x, const TermPtr& y);
// lhs < rhs in lexicographic order: α0<β0 ∨ (α0≈β0 ∧ [α1<β1 ∨ ...]).
FormulaPtr lex_less(const TermTuple& lhs, const TermTuple& rhs);

// Right-nested meet t_0 ∩ (t_1 ∩ (... ∩ t_k)); the list must be non-empty.
TermPtr meet_all(const TermTuple& parts, std::size_t from = 0);

// (u)+1 or (u)-1 modulo 2^width as a tuple of terms. Component j is
// u_j ⊕ (u_{j+1} ∩ ... ∩ u_n) for +1, with complemented factors for -1; the
// last component is u_n ⊕ 1. Suffix products are shared between components.
TermTuple shifted_tuple(const TermTuple& u, int direction);

}  // namespace tm2qbf
