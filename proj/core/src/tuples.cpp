#include "tm2qbf/tuples.hpp"

#include <stdexcept>
#include <string>

namespace tm2qbf {

namespace {
void check_widths(const TermTuple& lhs, const TermTuple& rhs, const char* what) {
  if (lhs.size() != rhs.size()) {
    throw std::invalid_argument(std::string(what) + ": tuple widths differ (" +
                                std::to_string(lhs.size()) + " vs " + std::to_string(rhs.size()) + ")");
  }
  if (lhs.empty()) throw std::invalid_argument(std::string(what) + ": empty tuples");
}
}  // namespace

VarTuple var_tuple(char kind, Index group, std::size_t width) {
  VarTuple out;
  out.reserve(width);
  for (std::size_t i = 0; i < width; ++i) out.push_back({kind, group, static_cast<std::uint32_t>(i)});
  return out;
}

TermTuple as_terms(const VarTuple& vars) {
  TermTuple out;
  out.reserve(vars.size());
  for (const auto& v : vars) out.push_back(term::var(v));
  return out;
}

std::vector<bool> to_bits(Index value, std::size_t width) {
  if (width < 128 && (value >> width) != 0) {
    throw std::invalid_argument(to_decimal(value) + " does not fit in " + std::to_string(width) + " bits");
  }
  std::vector<bool> bits(width, false);
  for (std::size_t i = 0; i < width && i < 128; ++i) {
    bits[width - 1 - i] = ((value >> i) & 1) != 0;
  }
  return bits;
}

Index from_bits(const std::vector<bool>& bits) {
  Index v = 0;
  for (bool b : bits) v = (v << 1) | (b ? 1 : 0);
  return v;
}

TermTuple constant_tuple(Index value, std::size_t width) {
  TermTuple out;
  out.reserve(width);
  for (bool b : to_bits(value, width)) out.push_back(term::constant(b));
  return out;
}

FormulaPtr eq_tuple(const TermTuple& lhs, const TermTuple& rhs) {
  check_widths(lhs, rhs, "eq_tuple");
  FormulaPtr acc = fo::eq(lhs[0], rhs[0]);
  for (std::size_t i = 1; i < lhs.size(); ++i) acc = fo::conj(acc, fo::eq(lhs[i], rhs[i]));
  return acc;
}

FormulaPtr bit_less(const TermPtr& x, const TermPtr& y) {
  return fo::conj(fo::eq(x, term::zero()), fo::eq(y, term::one()));
}

FormulaPtr lex_less(const TermTuple& lhs, const TermTuple& rhs) {
  check_widths(lhs, rhs, "lex_less");
  std::size_t n = lhs.size() - 1;
  FormulaPtr acc = bit_less(lhs[n], rhs[n]);
  for (std::size_t k = n; k-- > 0;) {
    acc = fo::disj(bit_less(lhs[k], rhs[k]), fo::conj(fo::eq(lhs[k], rhs[k]), acc));
  }
  return acc;
}

TermPtr meet_all(const TermTuple& parts, std::size_t from) {
  if (from >= parts.size()) throw std::invalid_argument("meet_all of an empty range");
  TermPtr acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > from;) acc = term::meet(parts[i], acc);
  return acc;
}

TermTuple shifted_tuple(const TermTuple& u, int direction) {
  if (u.empty()) throw std::invalid_argument("shifted_tuple of an empty tuple");
  if (direction != 1 && direction != -1) throw std::invalid_argument("direction must be +1 or -1");
  std::size_t n = u.size() - 1;
  TermTuple factors;
  factors.reserve(u.size());
  for (const auto& t : u) factors.push_back(direction > 0 ? t : term::comp(t));

  TermTuple out(u.size());
  out[n] = term::xor_(u[n], term::one());
  TermPtr suffix;  // factors[j+1] ∩ ... ∩ factors[n]
  for (std::size_t j = n; j-- > 0;) {
    suffix = suffix ? term::meet(factors[j + 1], suffix) : factors[j + 1];
    out[j] = term::xor_(u[j], suffix);
  }
  return out;
}

}  // namespace tm2qbf
