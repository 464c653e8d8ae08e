#pragma once

#include "tm2qbf/encoder.hpp"
#include "tm2qbf/machine.hpp"

namespace tm2qbf::bench {

// Scans right over the input and accepts on the first blank.
inline Program walker() {
  return prepare_program(parse_program("q0 > -> q0 R\nq0 0 -> q0 R\nq0 1 -> q0 R\nq0 _ -> q1 _\n"));
}

// Accepts strictly alternating inputs.
inline Program alternator() {
  return prepare_program(parse_program(
      "q0 > -> q3 R\nq3 0 -> q4 R\nq3 1 -> q2 1\nq4 1 -> q3 R\nq4 0 -> q2 0\nq3 _ -> q1 _\nq4 _ -> q1 _\n"));
}

inline Word alternating(std::size_t n) {
  Word w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = i % 2 == 0 ? kZero : kOne;
  return w;
}

}  // namespace tm2qbf::bench
