#pragma once

// First-order terms and formulas, shared as immutable DAGs.
//
// One AST covers both signatures: the Boolean-algebra one (0, 1, C, ∩, ∪, ≈)
// and the relational one (∼, optional constants c0 and c1, optional binary
// predicate). Intermediate translator output mixes the two, so the node types
// do not enforce a signature; validate() does.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tm2qbf {

// Colors reach 2^64 when the zone exponent equals a 64-symbol input.
using Index = unsigned __int128;

std::string to_decimal(Index v);
std::optional<Index> parse_decimal(std::string_view s);
std::size_t decimal_digits(Index v);

struct VarId {
  char kind = 'x';
  Index group = 0;
  std::uint32_t bit = 0;

  friend bool operator==(const VarId&, const VarId&) = default;
  friend std::strong_ordering operator<=>(const VarId& a, const VarId& b) {
    if (a.kind != b.kind) return a.kind <=> b.kind;
    if (a.group != b.group) return a.group < b.group ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.bit <=> b.bit;
  }
};

std::string to_string(const VarId& v);

struct VarIdHash {
  std::size_t operator()(const VarId& v) const noexcept {
    auto lo = static_cast<std::uint64_t>(v.group);
    auto hi = static_cast<std::uint64_t>(v.group >> 64);
    std::size_t h = std::hash<std::uint64_t>{}(lo * 0x9E3779B97F4A7C15ULL ^ hi);
    h ^= (static_cast<std::size_t>(v.kind) << 48) ^ (static_cast<std::size_t>(v.bit) * 0xC2B2AE3D27D4EB4FULL);
    return h;
  }
};

enum class TermKind : std::uint8_t { Zero, One, C0, C1, Var, Complement, Meet, Join };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind;
  VarId var;   // Var only
  TermPtr a;   // Complement, Meet, Join
  TermPtr b;   // Meet, Join

  bool is_constant() const {
    return kind == TermKind::Zero || kind == TermKind::One || kind == TermKind::C0 ||
           kind == TermKind::C1;
  }
};

enum class FormulaKind : std::uint8_t { Eq, Sim, Pred, Not, And, Or, Implies, ForAll, Exists };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FormulaKind kind;
  TermPtr lhs;              // Eq, Sim, Pred
  TermPtr rhs;              // Eq, Sim, Pred
  std::string pred;         // Pred
  FormulaPtr a;             // Not, And, Or, Implies, quantifier body
  FormulaPtr b;             // And, Or, Implies
  std::vector<VarId> vars;  // quantifiers, never empty

  bool is_atom() const {
    return kind == FormulaKind::Eq || kind == FormulaKind::Sim || kind == FormulaKind::Pred;
  }
  bool is_quantifier() const { return kind == FormulaKind::ForAll || kind == FormulaKind::Exists; }
};

namespace term {
TermPtr zero();
TermPtr one();
TermPtr c0();
TermPtr c1();
TermPtr var(const VarId& v);
TermPtr var(char kind, Index group, std::uint32_t bit);
TermPtr comp(TermPtr t);
TermPtr meet(TermPtr x, TermPtr y);
TermPtr join(TermPtr x, TermPtr y);
// x ⊕ y, expanded as (x ∩ C(y)) ∪ (C(x) ∩ y).
TermPtr xor_(TermPtr x, TermPtr y);
TermPtr constant(bool bit);
}  // namespace term

namespace fo {
FormulaPtr eq(TermPtr l, TermPtr r);
FormulaPtr sim(TermPtr l, TermPtr r);
FormulaPtr pred(std::string name, TermPtr l, TermPtr r);
FormulaPtr neg(FormulaPtr f);
FormulaPtr conj(FormulaPtr x, FormulaPtr y);
FormulaPtr disj(FormulaPtr x, FormulaPtr y);
FormulaPtr implies(FormulaPtr x, FormulaPtr y);
FormulaPtr forall(std::vector<VarId> vars, FormulaPtr body);
FormulaPtr exists(std::vector<VarId> vars, FormulaPtr body);
FormulaPtr quantifier(FormulaKind kind, std::vector<VarId> vars, FormulaPtr body);
// Left-associated; the list must be non-empty.
FormulaPtr conj_all(const std::vector<FormulaPtr>& parts);
FormulaPtr disj_all(const std::vector<FormulaPtr>& parts);
// Returns a node of the same kind with new children.
FormulaPtr rebuild(const Formula& like, FormulaPtr a, FormulaPtr b);
}  // namespace fo

using VarSet = std::set<VarId>;

void collect_vars(const TermPtr& t, VarSet& out);
VarSet free_vars(const FormulaPtr& f);
VarSet bound_vars(const FormulaPtr& f);
bool is_closed(const FormulaPtr& f);
// True when no quantifier binds a variable that an enclosing quantifier binds.
bool no_shadowing(const FormulaPtr& f);

bool structurally_equal(const TermPtr& x, const TermPtr& y);
bool structurally_equal(const FormulaPtr& x, const FormulaPtr& y);

// Number of distinct formula nodes in the DAG.
std::size_t dag_size(const FormulaPtr& f);

struct Signature {
  enum class Kind { BooleanAlgebra, Relational };
  Kind kind = Kind::BooleanAlgebra;
  bool constants = false;  // relational only: c0, c1
  std::string predicate;   // relational only: empty when absent

  static Signature boolean() { return {}; }
  static Signature relational(bool with_constants, std::string pred = {}) {
    return {Kind::Relational, with_constants, std::move(pred)};
  }
  bool operator==(const Signature&) const = default;
};

class SignatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void validate(const FormulaPtr& f, const Signature& sig);
// Smallest signature covering f; throws SignatureError on mixed input.
Signature infer_signature(const FormulaPtr& f);

}  // namespace tm2qbf
