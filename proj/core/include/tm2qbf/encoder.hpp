#pragma once

// Builds the simulating sentences for a machine and an input word.
//
// A record ŷ_t = ⟨x̂_t, q̂_t, ẑ_t, d̂_t, f̂_t⟩ samples the machine after step t:
// one tape cell x̂_t with content code f̂_t, the state q̂_t, the head position
// ẑ_t and the scanned code d̂_t. Addresses are m+1 bits wide, codes r+1 bits.
// Basic records use variable kinds x, q, z, d, f with the color t as group;
// the compression tuples v̂, â, b̂ are flat records of kind v, a, b grouped by
// level, with the five fields laid out in that same order.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tm2qbf/formula.hpp"
#include "tm2qbf/machine.hpp"
#include "tm2qbf/tuples.hpp"

namespace tm2qbf {

class EncodingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RecordLayout {
  unsigned m = 0;
  unsigned r = 0;

  std::size_t address_width() const { return m + 1; }
  std::size_t code_width() const { return r + 1; }
  // 2(m+1) + 3(r+1)
  std::size_t width() const { return 2 * address_width() + 3 * code_width(); }
};

struct RecordVars {
  VarTuple x, q, z, d, f;

  VarTuple all() const;
};

struct Record {
  TermTuple x, q, z, d, f;

  TermTuple all() const;
};

RecordVars basic_record_vars(Index color, const RecordLayout& layout);
RecordVars flat_record_vars(char kind, Index group, const RecordLayout& layout);
Record as_terms(const RecordVars& vars);

struct EncodingParams {
  Program program;  // normalized, idle run included
  Word input;
  std::size_t n = 0;
  unsigned m = 0;
  Index T = 1;
  unsigned r = 0;

  RecordLayout layout() const { return {m, r}; }
  TermTuple symbol_code(Symbol s) const;
  TermTuple state_code(State q) const;
  TermTuple address(Index cell) const;
};

inline constexpr unsigned kMaxZoneExponent = 120;

// add_idle_run(normalize(p))
Program prepare_program(const Program& p);

// m defaults to |x|. Requires |x| ≤ 2^m so that the input fits the zone.
// `program` must already be prepared.
EncodingParams derive_params(const Program& program, const Word& x,
                             std::optional<unsigned> m_override = std::nullopt);

// Smallest r with 2^(r+1) ≥ alphabet_size + max_state.
unsigned minimal_code_width(std::size_t alphabet_size, State max_state);

class Encoder {
 public:
  explicit Encoder(EncodingParams params);

  const EncodingParams& params() const { return params_; }
  RecordVars basic_vars(Index color) const { return basic_record_vars(color, params_.layout()); }
  Record basic(Index color) const { return as_terms(basic_vars(color)); }

  // ψ_t(μ → ε): x̂_t ≈ μ → f̂_t ≈ ε
  FormulaPtr clause(const Record& rec, const TermTuple& mu, const TermTuple& eps) const;
  // π_t(α, δ, ξ): d̂_t ≈ α ∧ q̂_t ≈ δ ∧ ẑ_t ≈ ξ
  FormulaPtr timer(const Record& rec, const TermTuple& alpha, const TermTuple& delta,
                   const TermTuple& xi) const;

  // φ(k) for the k-th instruction, 1-based, between records src and dst.
  FormulaPtr phi_k(std::size_t k, const Record& src, const Record& dst) const;
  std::size_t instruction_count() const { return params_.program.instructions.size(); }

  // Φ⁽⁰⁾ built once over the basic records of colors 0 and 1, then renamed.
  FormulaPtr phi0(const Record& src, const Record& dst) const;
  const FormulaPtr& phi0_template() const;
  // Φ⁽ˢ⁾ by the doubling recursion, with v̂, â, b̂ of group s at level s.
  FormulaPtr phi_s(unsigned s, const Record& src, const Record& dst) const;

  // Ψ L(t) for a concrete configuration, listing all cells 0..T.
  FormulaPtr psi_config(const Configuration& cfg, Index color) const;

  FormulaPtr chi0() const;
  FormulaPtr chi_omega() const;

  // [Ψ K(t) ∧ Φ⁽ˢ⁾(ŷ_t, ŷ_{t+2^s})] → Ψ K'(t+2^s), with ŷ_t, ŷ_{t+2^s} free.
  // `from.step` supplies the color t.
  FormulaPtr omega_s(const Configuration& from, const Configuration& to, unsigned s) const;
  // ∀ŷ_t ∀ŷ_{t+2^s} omega_s(...)
  FormulaPtr omega_s_sentence(const Configuration& from, const Configuration& to, unsigned s) const;

  // The closed sentence with the m compression blocks.
  FormulaPtr omega() const;

 private:
  const Instruction& instruction(std::size_t k) const;

  EncodingParams params_;
  mutable FormulaPtr phi0_template_;
};

// Sort key placing variables that are compared with each other next to each
// other: bit i of every record field and of the instruction-local tuples that
// match it, across all colors and levels. Used as a BDD variable order.
std::uint64_t record_order_key(const VarId& v, const RecordLayout& layout);

// Universal closure over the given tuples, in order, as one quantifier node.
FormulaPtr close_universally(const std::vector<VarTuple>& tuples, const FormulaPtr& body);

}  // namespace tm2qbf
