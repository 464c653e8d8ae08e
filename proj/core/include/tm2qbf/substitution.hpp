#pragma once

#include <map>
#include <stdexcept>

#include "tm2qbf/formula.hpp"
#include "tm2qbf/tuples.hpp"

namespace tm2qbf {

class CaptureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Substitution {
  std::map<VarId, TermPtr> map;

  void add(const VarId& v, TermPtr t);
  // Pairs from[i] with to[i]; throws on a width mismatch.
  void add(const VarTuple& from, const TermTuple& to);
  void add(const VarTuple& from, const VarTuple& to);
  bool empty() const { return map.empty(); }
};

TermPtr substitute(const TermPtr& t, const Substitution& s);
// Simultaneous, capture-avoiding substitution of free occurrences. Throws
// CaptureError when a replacement term would fall under a quantifier binding
// one of its variables. Unchanged subformulas are shared with the input.
FormulaPtr substitute(const FormulaPtr& f, const Substitution& s);
FormulaPtr substitute_tuple(const FormulaPtr& f, const VarTuple& from, const TermTuple& to);

}  // namespace tm2qbf
