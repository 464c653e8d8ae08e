#pragma once

// Finite structures with an equivalence relation ∼, optional constants c0 and
// c1, and optional named binary relations, plus brute-force model checking.
//
// JSON form:
//   {"domain_size": 3, "partition": [[0, 2], [1]],
//    "constants": {"c0": 0, "c1": 1}, "relations": {"N": [[0, 1], [1, 0]]}}

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tm2qbf/formula.hpp"

namespace tm2qbf {

class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EqStructure {
  std::size_t domain_size = 0;
  std::vector<std::vector<std::size_t>> partition;
  std::optional<std::pair<std::size_t, std::size_t>> constants;  // (c0, c1)
  std::map<std::string, std::set<std::pair<std::size_t, std::size_t>>> relations;

  // Checks that the partition covers the domain with disjoint non-empty
  // classes and that constants are elements. Throws StructureError.
  void check() const;
  std::size_t class_of(std::size_t element) const;
  bool nontrivial() const { return partition.size() >= 2; }

  // n elements, every element its own class.
  static EqStructure equality(std::size_t n);
  // Elements 0..n-1 spread round-robin over k classes; with_constants puts
  // c0 = 0 and c1 = 1, which land in different classes when k ≥ 2.
  static EqStructure classes(std::size_t n, std::size_t k, bool with_constants);
};

EqStructure parse_structure(std::string_view json);
std::string structure_json(const EqStructure& s);

// Truth of a closed relational sentence. Throws StructureError on an empty
// domain, a missing constant or relation, or a Boolean-algebra symbol.
bool eval_relational(const FormulaPtr& sentence, const EqStructure& model);

}  // namespace tm2qbf
