#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "generators.hpp"
#include "tm2qbf/interchange.hpp"

namespace tm2qbf::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "tm2qbf");
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string machine(const std::string& name) { return testing::data_path(name + ".tm"); }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tm2qbf_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, SimulateReportsOutcomeAndTrace) {
  Result r = call({"simulate", "--program", machine("walker"), "--input", "01", "--steps", "6", "--trace"});
  ASSERT_EQ(r.code, kOk) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["outcome"], "Accepted(4)");
  EXPECT_EQ(j["trace"].size(), 7u);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, kUsage);
  EXPECT_EQ(call({"simulate", "--input", "0"}).code, kUsage);
  EXPECT_EQ(call({"simulate", "--program", path("missing.tm"), "--input", "0"}).code, kUsage);
  std::string bad = write("bad.tm", "q0 0 => q1 1\n");
  Result r = call({"simulate", "--program", bad, "--input", "0"});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("line 1"), std::string::npos) << r.err;
  EXPECT_EQ(call({"verify", "--program", machine("walker"), "--input", "0101", "--zone-exp", "1"}).code, kUsage);
}

TEST_F(Cli, VerifyAgreesOnASmallInstance) {
  Result r = call({"verify", "--program", machine("bit-flipper"), "--input", "", "--zone-exp", "1", "--strategy",
                   "symbolic"});
  ASSERT_EQ(r.code, kOk) << r.err << r.out;
  json j = json::parse(r.out);
  EXPECT_EQ(j["omega_truth"], true);
  EXPECT_EQ(j["accepted_within_T"], true);
  EXPECT_EQ(j["simulator_outcome"], "Accepted(2)");
  EXPECT_EQ(j["agree"], true);
  EXPECT_EQ(j["T"], "2");
  EXPECT_GT(j["lengths"]["omega_len"].get<std::size_t>(), j["lengths"]["omega_len_noidx"].get<std::size_t>());
  Result rejecting = call({"verify", "--program", machine("immediate-reject"), "--input", "1", "--zone-exp", "1",
                           "--strategy", "symbolic"});
  ASSERT_EQ(rejecting.code, kOk) << rejecting.err;
  EXPECT_EQ(json::parse(rejecting.out)["omega_truth"], false);
}

TEST_F(Cli, VerifySpecimens) {
  Result early = call({"verify", "--program", machine("walker"), "--input", "01", "--zone-exp", "1", "--strategy",
                       "symbolic"});
  ASSERT_EQ(early.code, kOk) << early.err;
  json j = json::parse(early.out);
  EXPECT_EQ(j["omega_truth"], false);
  EXPECT_EQ(j["simulator_outcome"], "Running");
  EXPECT_EQ(j["agree"], true);
  Result reject = call({"verify", "--program", machine("immediate-reject"), "--input", "0", "--zone-exp", "1",
                        "--strategy", "symbolic"});
  ASSERT_EQ(reject.code, kOk) << reject.err;
  EXPECT_EQ(json::parse(reject.out)["agree"], true);
  // Walker accepts "01" at step 4 = T, but Ω is false at m = 2 because the
  // copy subformula leaves unrelated cells free (see the ConstructionGap
  // encoder tests). verify reports that as a disagreement.
  Result gap = call({"verify", "--program", machine("walker"), "--input", "01", "--zone-exp", "2", "--strategy",
                     "symbolic"});
  EXPECT_EQ(gap.code, kDisagree) << gap.err;
  json g = json::parse(gap.out);
  EXPECT_EQ(g["simulator_outcome"], "Accepted(4)");
  EXPECT_EQ(g["omega_truth"], false);
  EXPECT_EQ(g["agree"], false);
}

TEST_F(Cli, VerifyReportSchema) {
  Result r = call({"verify", "--program", machine("walker"), "--input", "0", "--zone-exp", "1", "--strategy",
                   "symbolic"});
  ASSERT_EQ(r.code, kOk) << r.err;
  json j = json::parse(r.out);
  ASSERT_TRUE(j.is_object());
  for (const char* key : {"T", "input", "machine", "simulator_outcome", "solver", "strategy"}) {
    EXPECT_TRUE(j[key].is_string()) << key;
  }
  for (const char* key : {"m", "r", "search_nodes"}) EXPECT_TRUE(j[key].is_number_unsigned()) << key;
  for (const char* key : {"omega_truth", "accepted_within_T", "agree"}) EXPECT_TRUE(j[key].is_boolean()) << key;
  for (const char* key : {"dag_size", "omega_len", "omega_len_noidx"}) {
    EXPECT_TRUE(j["lengths"][key].is_number_unsigned()) << key;
  }
  for (const char* key : {"build", "evaluate", "simulate"}) EXPECT_TRUE(j["wall_ms"][key].is_number()) << key;
  EXPECT_EQ(j.size(), 14u);
}

TEST_F(Cli, VerifyBudgetExhaustionExitsTwo) {
  Result r = call({"verify", "--program", machine("walker"), "--input", "0", "--zone-exp", "1", "--strategy",
                   "naive", "--budget-ms", "5"});
  EXPECT_EQ(r.code, kBudget) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["omega_truth"], "timeout");
  EXPECT_TRUE(j["agree"].is_null());
}

TEST_F(Cli, EncodeIsDeterministic) {
  std::string a = path("a.qcir"), b = path("b.qcir");
  for (const auto& out : {a, b}) {
    Result r = call({"encode", "--program", machine("alternator"), "--input", "01", "--zone-exp", "2", "--format",
                     "qcir", "--out", out});
    ASSERT_EQ(r.code, kOk) << r.err;
  }
  std::ifstream fa(a), fb(b);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  EXPECT_FALSE(sa.str().empty());
  EXPECT_EQ(sa.str(), sb.str());
  Result i = call({"encode", "--program", machine("alternator"), "--input", "01"});
  ASSERT_EQ(i.code, kOk);
  EXPECT_TRUE(is_closed(parse_formula(i.out).formula));
  EXPECT_NE(i.err.find("warning"), std::string::npos);
}

TEST_F(Cli, EvalEachFormat) {
  std::string f = write("f.txt", "tm2qbf-formula v1\nsignature boolean\n(forall (x0,0) (exists (x1,0) (eq x1,0 (comp x0,0))))\n");
  Result r = call({"eval", "--formula", f});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(json::parse(r.out)["verdict"], "true");
  // ∀u∃e (e ↔ u)
  std::string q = write("f.qdimacs", "p cnf 2 2\na 1 0\ne 2 0\n-1 2 0\n1 -2 0\n");
  Result rq = call({"eval", "--formula", q, "--format", "qdimacs"});
  ASSERT_EQ(rq.code, kOk) << rq.err;
  EXPECT_EQ(json::parse(rq.out)["verdict"], "true");
  // Ω exported as QDIMACS is beyond plain QDPLL; the budget turns that into exit 2.
  std::string omega = path("omega.qdimacs");
  ASSERT_EQ(call({"encode", "--program", machine("walker"), "--input", "0", "--zone-exp", "1", "--format",
                  "qdimacs", "--out", omega}).code, kOk);
  Result budget = call({"eval", "--formula", omega, "--format", "qdimacs", "--budget-ms", "200"});
  EXPECT_EQ(budget.code, kBudget);
  EXPECT_EQ(json::parse(budget.out)["verdict"], "budget-exceeded");
  EXPECT_EQ(call({"eval", "--formula", q, "--format", "qdimacs", "--strategy", "guarded"}).code, kUsage);
}

TEST_F(Cli, TranslateModes) {
  std::string f = write("f.txt", "tm2qbf-formula v1\nsignature boolean\n(forall (x0,0) (exists (x1,0) (eq x1,0 (comp x0,0))))\n");
  Result r20 = call({"translate", "--formula", f, "--mode", "2.0", "--check-model"});
  ASSERT_EQ(r20.code, kOk) << r20.err;
  EXPECT_EQ(parse_formula(r20.out).signature, Signature::relational(true));
  EXPECT_NE(r20.err.find("\"equivalent\":true"), std::string::npos) << r20.err;
  EXPECT_EQ(call({"translate", "--formula", f, "--mode", "2.2"}).code, kUsage);
  std::string n = write("n.txt", "tm2qbf-formula v1\nsignature relational\n(not (sim p0,0 p1,0))\n");
  Result r22 = call({"translate", "--formula", f, "--mode", "2.2", "--n-formula", n, "--check-model"});
  EXPECT_EQ(r22.code, kOk) << r22.err;
  std::string two = write("two.txt", "tm2qbf-formula v1\nsignature boolean\n(forall (x0,0) (or (eq x0,0 0) (eq x0,0 1)))\n");
  Result dom = call({"translate", "--formula", two, "--mode", "2.0", "--check-model"});
  ASSERT_EQ(dom.code, kOk) << dom.err;
  EXPECT_NE(dom.err.find("\"equivalent\":true"), std::string::npos) << dom.err;
  Result r21 = call({"translate", "--formula", two, "--mode", "2.1"});
  ASSERT_EQ(r21.code, kOk) << r21.err;
  EXPECT_EQ(parse_formula(r21.out).signature, Signature::relational(false));
  Result header22 = call({"translate", "--formula", two, "--mode", "2.2", "--n-formula", n});
  ASSERT_EQ(header22.code, kOk) << header22.err;
  EXPECT_EQ(parse_formula(header22.out).signature, Signature::relational(false));
  std::string model = write("m.json", R"({"domain_size": 2, "partition": [[0, 1]]})");
  Result trivial = call({"translate", "--formula", f, "--mode", "2.1", "--model", model});
  EXPECT_EQ(trivial.code, kDisagree) << trivial.err;
}

TEST_F(Cli, ReduceAndCompare) {
  std::string p = write("p.tm", "q0 > -> q3 R\nq3 0 -> q1 0\nq7 1 -> q3 L\n");
  std::string q = write("q.tm", "q3 0 -> q1 0\nq0 > -> q3 R\n");
  Result r = call({"reduce", "--program", p});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, "q0 > -> q3 R\nq3 0 -> q1 0\n");
  Result c = call({"reduce", "--program", p, "--compare", q});
  EXPECT_EQ(json::parse(c.out)["monoclonal"], true);
}

TEST_F(Cli, StatsPrintsCsv) {
  Result r = call({"stats", "--program", machine("walker"), "--lengths", "2,4,8"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind("x_len,p_len,omega_len,omega_len_noidx,build_ms\n", 0), 0u);
  EXPECT_NE(r.err.find("slope"), std::string::npos);
  Result j = call({"stats", "--program", machine("walker"), "--lengths", "2,4", "--json"});
  ASSERT_EQ(j.code, kOk);
  json doc = json::parse(j.out);
  EXPECT_EQ(doc["rows"].size(), 2u);
  EXPECT_TRUE(doc["slope"].is_number());
  EXPECT_TRUE(doc["lengths_cover_input"].is_boolean());
  for (const auto& row : doc["rows"]) {
    for (const char* key : {"x_len", "p_len", "omega_len", "omega_len_noidx"}) {
      EXPECT_TRUE(row[key].is_number_unsigned()) << key;
    }
    EXPECT_TRUE(row["build_ms"].is_number());
  }
}

TEST_F(Cli, StatsSlopeOverDoublingInputs) {
  Result r = call({"stats", "--program", machine("walker"), "--lengths", "4,8,16,32", "--json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  json doc = json::parse(r.out);
  EXPECT_EQ(doc["rows"].size(), 4u);
  EXPECT_GT(doc["slope"].get<double>(), 1.0);
  EXPECT_LT(doc["slope"].get<double>(), 2.5);
  EXPECT_EQ(doc["lengths_cover_input"], true);
}

}  // namespace
}  // namespace tm2qbf::cli
