#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "tm2qbf/audit.hpp"
#include "tm2qbf/render.hpp"

namespace tm2qbf {
namespace {

TEST(Audit, InputAlternates) {
  EXPECT_EQ(audit_input(5), (Word{kZero, kOne, kZero, kOne, kZero}));
  EXPECT_TRUE(audit_input(0).empty());
}

TEST(Audit, SlopeOfExactPowerLaws) {
  std::vector<double> x{2, 4, 8, 16};
  std::vector<double> y;
  for (double v : x) y.push_back(3 * v * v);
  EXPECT_NEAR(loglog_slope(x, y), 2.0, 1e-9);
  EXPECT_THROW(loglog_slope({2, 2}, {1, 5}), std::invalid_argument);
}

TEST(Audit, RowMatchesADirectBuild) {
  Program p = testing::load_program("walker");
  AuditRow row = audit_one(p, audit_input(4));
  EncodingParams params = derive_params(prepare_program(p), audit_input(4));
  FormulaPtr omega = Encoder(params).omega();
  EXPECT_EQ(row.x_len, 4u);
  EXPECT_EQ(row.p_len, program_length(p));
  EXPECT_EQ(row.omega_len, length_natural(omega));
  EXPECT_EQ(row.omega_len_noidx, length_natural_noidx(omega));
}

TEST(Audit, ReportAndCsv) {
  AuditReport r = length_audit(testing::load_program("alternator"), {2, 4, 8});
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_TRUE(r.lengths_cover_input);
  EXPECT_GT(r.slope, 0.5);
  EXPECT_LT(r.slope, 2.5);
  std::string csv = audit_csv(r);
  EXPECT_EQ(csv.rfind("x_len,p_len,omega_len,omega_len_noidx,build_ms\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(audit_json(r).find("\"slope\""), std::string::npos);
}

}  // namespace
}  // namespace tm2qbf
