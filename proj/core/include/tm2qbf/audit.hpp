#pragma once

// Formula-length audit over growing inputs with the zone exponent m = |X|.

#include <cstddef>
#include <string>
#include <vector>

#include "tm2qbf/machine.hpp"

namespace tm2qbf {

struct AuditRow {
  std::size_t x_len = 0;
  std::size_t p_len = 0;
  std::size_t omega_len = 0;
  std::size_t omega_len_noidx = 0;
  double build_ms = 0.0;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  double slope = 0.0;  // least-squares slope of log(omega_len) against log(x_len)
  bool lengths_cover_input = true;  // every row has x_len ≤ omega_len
};

// The input of length n alternates 0 and 1, starting with 0.
Word audit_input(std::size_t n);

AuditRow audit_one(const Program& program, const Word& input);
AuditReport length_audit(const Program& program, const std::vector<std::size_t>& input_lengths);

// Least-squares slope of log(y) against log(x); needs two distinct x values.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

std::string audit_csv(const AuditReport& report);
std::string audit_json(const AuditReport& report);

}  // namespace tm2qbf
