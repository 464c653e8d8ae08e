#pragma once

// Quantified Boolean circuits, the QCIR and QDIMACS formats, and the two
// internal solvers behind the QbfSearch and Symbolic strategies.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tm2qbf/evaluator.hpp"
#include "tm2qbf/formula.hpp"

namespace tm2qbf {

class QbfFormatError : public std::runtime_error {
 public:
  QbfFormatError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Gate ids start at 1; a literal is a gate id, negated for complement.
// Inputs are variables. And() with no inputs is true, Or() is false.
struct Circuit {
  enum class Op : std::uint8_t { Input, And, Or, ForAll, Exists };

  struct Gate {
    Op op = Op::Input;
    std::vector<int> inputs;  // And/Or: any literals; quantifiers: the body
    std::vector<int> bound;   // quantifiers: bound input ids
  };

  std::vector<Gate> gates;
  std::vector<std::string> labels;  // per gate; variable names for inputs
  int output = 0;

  int add(Gate g, std::string label = {});
  const Gate& at(int id) const { return gates.at(static_cast<std::size_t>(id) - 1); }
  std::size_t size() const { return gates.size(); }
  std::size_t input_count() const;
};

// Atoms t ≈ s become (t ∧ s) ∨ (¬t ∧ ¬s). Inputs are numbered first, sorted
// by `order` when given, one per quantifier occurrence.
Circuit to_circuit(const FormulaPtr& sentence, const VarOrderKey& order = {});

// Non-prenex QCIR; the leading quantifier gates of the output become the
// prefix. Only gates reachable from the output are written.
std::string write_qcir(const Circuit& c);
Circuit parse_qcir(std::string_view text);

struct Qdimacs {
  int num_vars = 0;
  std::vector<std::pair<bool, std::vector<int>>> prefix;  // (universal, vars)
  std::vector<std::vector<int>> clauses;
};

// Prenexes with fresh variables for every quantifier occurrence, keeping the
// nesting order, then clausifies with Tseitin variables in an innermost
// existential block.
Qdimacs to_qdimacs(const Circuit& c);
std::string write_qdimacs(const Qdimacs& q);
Qdimacs parse_qdimacs(std::string_view text);

EvalResult solve_qdimacs(const Qdimacs& q, const Budget& budget);
// BDD levels follow input ids.
EvalResult solve_bdd(const Circuit& c, const Budget& budget);

}  // namespace tm2qbf
