#include "tm2qbf/audit.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>
#include "tm2qbf/encoder.hpp"
#include "tm2qbf/render.hpp"

namespace tm2qbf {

Word audit_input(std::size_t n) {
  Word w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = (i % 2 == 0) ? kZero : kOne;
  return w;
}

AuditRow audit_one(const Program& program, const Word& input) {
  auto start = std::chrono::steady_clock::now();
  Program prepared = prepare_program(program);
  Encoder enc(derive_params(prepared, input));
  FormulaPtr omega = enc.omega();
  auto stop = std::chrono::steady_clock::now();
  AuditRow row;
  row.x_len = input.size();
  row.p_len = program_length(program);
  row.omega_len = length_natural(omega);
  row.omega_len_noidx = length_natural_noidx(omega);
  row.build_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return row;
}

AuditReport length_audit(const Program& program, const std::vector<std::size_t>& input_lengths) {
  if (input_lengths.empty()) throw std::invalid_argument("length audit needs at least one input length");
  AuditReport report;
  std::vector<double> xs, ys;
  for (std::size_t n : input_lengths) {
    AuditRow row = audit_one(program, audit_input(n));
    if (row.x_len > row.omega_len) report.lengths_cover_input = false;
    xs.push_back(static_cast<double>(row.x_len));
    ys.push_back(static_cast<double>(row.omega_len));
    report.rows.push_back(row);
  }
  report.slope = xs.size() >= 2 ? loglog_slope(xs, ys) : 0.0;
  return report;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs two or more points");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0) throw std::invalid_argument("slope fit needs positive values");
    double lx = std::log(x[i]);
    double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) throw std::invalid_argument("slope fit needs distinct x values");
  return (n * sxy - sx * sy) / denom;
}

std::string audit_csv(const AuditReport& report) {
  std::ostringstream out;
  out << "x_len,p_len,omega_len,omega_len_noidx,build_ms\n";
  out.setf(std::ios::fixed);
  out.precision(3);
  for (const auto& r : report.rows) {
    out << r.x_len << ',' << r.p_len << ',' << r.omega_len << ',' << r.omega_len_noidx << ','
        << r.build_ms << '\n';
  }
  return out.str();
}

std::string audit_json(const AuditReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"x_len", r.x_len},
                    {"p_len", r.p_len},
                    {"omega_len", r.omega_len},
                    {"omega_len_noidx", r.omega_len_noidx},
                    {"build_ms", r.build_ms}});
  }
  nlohmann::json j = {{"rows", rows},
                      {"slope", report.slope},
                      {"lengths_cover_input", report.lengths_cover_input}};
  return j.dump(2);
}

}  // namespace tm2qbf
