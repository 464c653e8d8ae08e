#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "tm2qbf/encoder.hpp"
#include "tm2qbf/qbf.hpp"
#include "tm2qbf/render.hpp"

namespace tm2qbf {
namespace {

using namespace term;

const VarId kX{'x', 0, 0};
const VarId kY{'x', 1, 0};

FormulaPtr has_complement() {
  return fo::forall({kX}, fo::exists({kY}, fo::eq(var(kY), comp(var(kX)))));
}

bool naive(const FormulaPtr& f) {
  EvalOptions opts;
  opts.strategy = Strategy::Naive;
  return eval_sentence(f, opts).value();
}

TEST(Circuit, InputsFollowTheOrderKey) {
  FormulaPtr f = fo::forall({kY}, fo::exists({kX}, fo::eq(var(kX), var(kY))));
  Circuit plain = to_circuit(f);
  EXPECT_EQ(plain.input_count(), 2u);
  EXPECT_EQ(plain.labels[0], "x1,0");
  Circuit keyed = to_circuit(f, [](const VarId& v) { return static_cast<std::uint64_t>(v.group); });
  EXPECT_EQ(keyed.labels[0], "x0,0");
}

TEST(Circuit, EveryQuantifierOccurrenceGetsItsOwnInput) {
  FormulaPtr body = fo::eq(var(kX), one());
  FormulaPtr f = fo::conj(fo::exists({kX}, body), fo::forall({kX}, body));
  EXPECT_EQ(to_circuit(f).input_count(), 2u);
  EXPECT_FALSE(solve_bdd(to_circuit(f), {}).value());
}

TEST(Qcir, PinnedOutput) {
  std::string text = write_qcir(to_circuit(has_complement()));
  EXPECT_EQ(text.rfind("#QCIR-G14\n", 0), 0u);
  EXPECT_NE(text.find("forall(1)"), std::string::npos);
  EXPECT_NE(text.find("exists(2)"), std::string::npos);
  EXPECT_NE(text.find("output("), std::string::npos);
}

TEST(Qcir, ParsesHandWrittenCircuits) {
  // ∀a∃b (a xor b), with gates referring to variables bound later.
  Circuit c = parse_qcir("#QCIR-G14\nforall(a)\noutput(g2)\ng1 = xor(a, b)\ng2 = exists(b; g1)\n");
  EXPECT_TRUE(solve_bdd(c, {}).value());
  Circuit d = parse_qcir("#QCIR-G14\nexists(a)\noutput(g)\ng = and(a, -a)\n");
  EXPECT_FALSE(solve_bdd(d, {}).value());
  EXPECT_FALSE(solve_qdimacs(to_qdimacs(d), {}).value());
}

TEST(Qcir, RejectsMalformedInput) {
  EXPECT_THROW(parse_qcir("#QCIR-G14\nexists(a)\noutput(g)\ng = and(a, c)\n"), QbfFormatError);
  EXPECT_THROW(parse_qcir("#QCIR-G14\nexists(a)\nexists(a)\noutput(a)\n"), QbfFormatError);
  EXPECT_THROW(parse_qcir("#QCIR-G14\nexists(a)\noutput(g)\ng = and(a\n"), QbfFormatError);
  EXPECT_THROW(parse_qcir("#QCIR-G14\nexists(a)\noutput(g)\ng = and(a)\ng = or(a)\n"), QbfFormatError);
  try {
    parse_qcir("#QCIR-G14\nexists(a)\noutput(g)\ng = forall(a)\n");
    FAIL() << "expected a format error";
  } catch (const QbfFormatError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(Qdimacs, PrenexKeepsPolarityUnderNegation) {
  // ¬∀x (x ≈ 1) is ∃x ¬(x ≈ 1): the quantifier block turns existential.
  FormulaPtr f = fo::neg(fo::forall({kX}, fo::eq(var(kX), one())));
  Qdimacs q = to_qdimacs(to_circuit(f));
  ASSERT_FALSE(q.prefix.empty());
  for (const auto& [universal, vars] : q.prefix) EXPECT_FALSE(universal);
  EXPECT_TRUE(solve_qdimacs(q, {}).value());
}

TEST(Qdimacs, WriteParseRoundTrip) {
  Qdimacs q = to_qdimacs(to_circuit(has_complement()));
  Qdimacs back = parse_qdimacs(write_qdimacs(q));
  EXPECT_EQ(back.num_vars, q.num_vars);
  EXPECT_EQ(back.prefix, q.prefix);
  EXPECT_EQ(back.clauses, q.clauses);
  EXPECT_TRUE(solve_qdimacs(back, {}).value());
}

TEST(Qdimacs, TautologicalClausesDoNotConflict) {
  // e1 ∨ u ∨ ¬u is always true; universal reduction must not empty it.
  Qdimacs q = parse_qdimacs("p cnf 3 3\ne 1 0\na 2 0\ne 3 0\n-3 0\n3 2 -2 0\n1 0\n");
  EXPECT_TRUE(solve_qdimacs(q, {}).value());
}

TEST(Qdimacs, RejectsMalformedInput) {
  EXPECT_THROW(parse_qdimacs("e 1 0\n1 0\n"), QbfFormatError);
  EXPECT_THROW(parse_qdimacs("p cnf 1 1\n2 0\n"), QbfFormatError);
  EXPECT_THROW(parse_qdimacs("p cnf 1 1\ne 1 0\ne 1 0\n1 0\n"), QbfFormatError);
  EXPECT_THROW(parse_qdimacs("p cnf 1 2\n1 0\n"), QbfFormatError);
  EXPECT_THROW(parse_qdimacs("p cnf 1 1\n1\n"), QbfFormatError);
  EXPECT_THROW(parse_qdimacs("p cnf 1 1\n1 0\ne 1 0\n"), QbfFormatError);
}

TEST(Export, PropertyFormatsPreserveTruth) {
  std::mt19937 rng(41);
  testing::FormulaShape shape;
  shape.max_bound = 8;
  for (int i = 0; i < 300; ++i) {
    FormulaPtr f = testing::random_sentence(rng, shape);
    const bool expected = naive(f);
    Circuit c = to_circuit(f);
    Circuit reread = parse_qcir(write_qcir(c));
    EXPECT_EQ(solve_bdd(reread, {}).value(), expected) << render_natural(f);
    EXPECT_EQ(solve_qdimacs(to_qdimacs(reread), {}).value(), expected) << render_natural(f);
    Qdimacs q = parse_qdimacs(write_qdimacs(to_qdimacs(c)));
    EXPECT_EQ(solve_qdimacs(q, {}).value(), expected) << render_natural(f);
  }
}

// Quantifiers in the premise of Ω flip polarity: χ(0)'s tail becomes
// existential and the compression block's v̂₁ universal.
TEST(Qdimacs, OmegaPrefixFollowsTheQuantifierNesting) {
  EncodingParams p = testing::corpus_params("walker", "0", 1);
  Encoder enc(p);
  Qdimacs q = to_qdimacs(to_circuit(enc.omega()));
  const std::size_t width = p.layout().width();
  ASSERT_GE(q.prefix.size(), 4u);
  EXPECT_TRUE(q.prefix[0].first);
  EXPECT_EQ(q.prefix[0].second.size(), 2 * width);
  EXPECT_FALSE(q.prefix[1].first);
  EXPECT_EQ(q.prefix[1].second.size(), p.layout().address_width());
  EXPECT_TRUE(q.prefix[2].first);
  EXPECT_EQ(q.prefix[2].second.size(), width);
  EXPECT_FALSE(q.prefix.back().first);
  for (std::size_t i = 1; i < q.prefix.size(); ++i) EXPECT_NE(q.prefix[i].first, q.prefix[i - 1].first);
}

TEST(Solvers, NodeBudget) {
  std::vector<VarId> xs;
  FormulaPtr body = fo::eq(zero(), zero());
  for (std::uint32_t i = 0; i < 20; ++i) {
    xs.push_back({'x', 0, i});
    body = fo::conj(body, fo::disj(fo::eq(var(xs.back()), zero()), fo::eq(var(xs.back()), one())));
  }
  Circuit c = to_circuit(fo::forall(xs, body));
  EXPECT_EQ(solve_qdimacs(to_qdimacs(c), {std::chrono::milliseconds(0), 5}).verdict, Verdict::BudgetExceeded);
  EXPECT_EQ(solve_bdd(c, {std::chrono::milliseconds(0), 3}).verdict, Verdict::BudgetExceeded);
  EXPECT_EQ(solve_bdd(c, {}).verdict, Verdict::True);
}

}  // namespace
}  // namespace tm2qbf
