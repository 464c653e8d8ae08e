#pragma once

// Line-oriented prefix format with an explicit signature header:
//
//   tm2qbf-formula v1
//   signature boolean                       (or: signature relational [constants] [predicate N])
//   (forall (x0,0 x0,1) (imp (eq x0,0 0) (eq (comp x0,1) 1)))
//
// Formulas: (eq T T) (sim T T) (pred NAME T T) (not F) (and F F) (or F F)
// (imp F F) (forall (VARS) F) (exists (VARS) F). Terms: 0 1 c0 c1, variables
// such as x16,0, (comp T) (meet T T) (join T T). Every node is parenthesized.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tm2qbf/formula.hpp"

namespace tm2qbf {

class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t offset, const std::string& what);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct Document {
  Signature signature;
  FormulaPtr formula;
};

std::string serialize(const FormulaPtr& f, const Signature& sig);
// Uses infer_signature(f).
std::string serialize(const FormulaPtr& f);
// Validates the formula against the declared signature.
Document parse_formula(std::string_view text);

std::string signature_line(const Signature& sig);

}  // namespace tm2qbf
