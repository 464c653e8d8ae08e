#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "tm2qbf/evaluator.hpp"
#include "tm2qbf/qbf.hpp"
#include "tm2qbf/render.hpp"

namespace tm2qbf {
namespace {

using namespace term;

const VarId kX{'x', 0, 0};
const VarId kY{'x', 1, 0};
const VarId kZ{'x', 2, 0};

constexpr Strategy kAll[] = {Strategy::Naive, Strategy::ShortCircuit, Strategy::Guarded, Strategy::QbfSearch,
                             Strategy::Symbolic};

Verdict run(const FormulaPtr& f, Strategy s) {
  EvalOptions opts;
  opts.strategy = s;
  return eval_sentence(f, opts).verdict;
}

TEST(Strategies, NamesRoundTrip) {
  for (Strategy s : kAll) EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_FALSE(parse_strategy("magic").has_value());
  EXPECT_EQ(to_string(Verdict::BudgetExceeded), "budget-exceeded");
}

TEST(Terms, EvaluateOverTwoElements) {
  Assignment a{{kX, true}, {kY, false}};
  EXPECT_TRUE(eval_term(join(var(kX), var(kY)), a));
  EXPECT_FALSE(eval_term(meet(var(kX), var(kY)), a));
  EXPECT_TRUE(eval_term(comp(var(kY)), a));
  EXPECT_TRUE(eval_term(xor_(var(kX), var(kY)), a));
  EXPECT_THROW(eval_term(var(kZ), a), EvaluationError);
  EXPECT_THROW(eval_term(c0(), a), EvaluationError);
}

TEST(Terms, ElementaryExamples) {
  EXPECT_TRUE(eval_term(comp(zero()), {}));
  EXPECT_TRUE(eval_term(meet(one(), join(zero(), one())), {}));
  EXPECT_FALSE(eval_term(xor_(one(), one()), {}));
}

TEST(KnownSentences, DomainHasExactlyTwoElements) {
  FormulaPtr two = fo::forall({kX}, fo::disj(fo::eq(var(kX), zero()), fo::eq(var(kX), one())));
  FormulaPtr irreflexive = fo::exists({kX}, fo::neg(fo::eq(var(kX), var(kX))));
  for (Strategy s : kAll) {
    EXPECT_EQ(run(two, s), Verdict::True) << to_string(s);
    EXPECT_EQ(run(irreflexive, s), Verdict::False) << to_string(s);
  }
  std::string qcir = write_qcir(to_circuit(two));
  EXPECT_NE(qcir.find("forall("), std::string::npos);
  EXPECT_EQ(qcir.find("exists("), std::string::npos);
  Circuit back = parse_qcir(qcir);
  EXPECT_EQ(back.input_count(), 1u);
  EXPECT_TRUE(solve_bdd(back, {}).value());
  EXPECT_TRUE(solve_qdimacs(to_qdimacs(back), {}).value());
}

TEST(KnownSentences, EveryStrategy) {
  // ∀x∃y y ≈ C(x)
  FormulaPtr has_complement = fo::forall({kX}, fo::exists({kY}, fo::eq(var(kY), comp(var(kX)))));
  // ∃y∀x x ∩ y ≈ x
  FormulaPtr has_top = fo::exists({kY}, fo::forall({kX}, fo::eq(meet(var(kX), var(kY)), var(kX))));
  // ∀x∀y x ≈ y
  FormulaPtr trivial = fo::forall({kX, kY}, fo::eq(var(kX), var(kY)));
  // ∃x∃y∃z pairwise distinct
  FormulaPtr three = fo::exists({kX, kY, kZ}, fo::conj(fo::conj(fo::neg(fo::eq(var(kX), var(kY))),
                                                                fo::neg(fo::eq(var(kY), var(kZ)))),
                                                       fo::neg(fo::eq(var(kX), var(kZ)))));
  FormulaPtr ground = fo::implies(fo::eq(zero(), one()), fo::eq(one(), zero()));
  for (Strategy s : kAll) {
    EXPECT_EQ(run(has_complement, s), Verdict::True) << to_string(s);
    EXPECT_EQ(run(has_top, s), Verdict::True) << to_string(s);
    EXPECT_EQ(run(trivial, s), Verdict::False) << to_string(s);
    EXPECT_EQ(run(three, s), Verdict::False) << to_string(s);
    EXPECT_EQ(run(ground, s), Verdict::True) << to_string(s);
  }
}

TEST(Sentences, RejectFreeVariablesAndRelationalSymbols) {
  EXPECT_THROW(eval_sentence(fo::eq(var(kX), zero())), EvaluationError);
  EXPECT_THROW(eval_sentence(fo::forall({kX}, fo::sim(var(kX), var(kX)))), std::exception);
}

TEST(Formulas, EnvironmentSuppliesFreeVariables) {
  FormulaPtr f = fo::exists({kY}, fo::conj(fo::eq(var(kY), var(kX)), fo::eq(var(kY), one())));
  EXPECT_TRUE(eval_formula(f, {{kX, true}}).value());
  EXPECT_FALSE(eval_formula(f, {{kX, false}}).value());
  EXPECT_THROW(eval_formula(f, {}), EvaluationError);
}

TEST(Strategies, PropertyAgreeOnRandomSentences) {
  std::mt19937 rng(31);
  testing::FormulaShape shape;
  shape.max_bound = 8;
  for (int i = 0; i < 300; ++i) {
    FormulaPtr f = testing::random_sentence(rng, shape);
    Verdict expected = run(f, Strategy::Naive);
    ASSERT_NE(expected, Verdict::BudgetExceeded);
    for (Strategy s : kAll) EXPECT_EQ(run(f, s), expected) << to_string(s) << " on " << render_natural(f);
  }
}

// Guard binding rewrites ∀X(x ≈ t → φ) and ∃X(x ≈ t ∧ φ) by binding x to the
// value of t. The result must match plain enumeration, including when t
// mentions other variables of the same block.
TEST(Guarded, PropertyGuardBindingIsSound) {
  std::mt19937 rng(32);
  testing::FormulaShape inner;
  inner.max_bound = 3;
  inner.max_depth = 3;
  for (int i = 0; i < 200; ++i) {
    std::vector<VarId> block{{'g', 0, 0}, {'g', 0, 1}, {'g', 0, 2}};
    std::vector<VarId> outer{{'o', 0, 0}};
    std::vector<VarId> scope = block;
    scope.insert(scope.end(), outer.begin(), outer.end());
    const VarId& bound = block[rng() % block.size()];
    std::vector<VarId> others;
    for (const auto& v : scope) {
      if (v != bound) others.push_back(v);
    }
    TermPtr t = testing::random_term(rng, others, 2);
    FormulaPtr guard = fo::eq(var(bound), t);
    if (rng() % 2) guard = fo::eq(t, var(bound));
    FormulaPtr body = testing::random_formula(rng, scope, inner);
    FormulaPtr f = rng() % 2 ? fo::forall(block, fo::implies(guard, body))
                             : fo::exists(block, fo::conj(guard, body));
    f = rng() % 2 ? fo::forall(outer, f) : fo::exists(outer, f);
    EXPECT_EQ(run(f, Strategy::Guarded), run(f, Strategy::Naive)) << render_natural(f);
  }
}

FormulaPtr hard_sentence(unsigned width) {
  // ∀X∃Y X ≈ Y with an alternation per bit keeps every strategy busy.
  std::vector<FormulaPtr> parts;
  std::vector<VarId> xs, ys;
  for (unsigned i = 0; i < width; ++i) {
    xs.push_back({'x', 0, i});
    ys.push_back({'y', 0, i});
    parts.push_back(fo::eq(join(var(xs.back()), var(ys.back())), meet(var(xs.back()), var(ys.back()))));
  }
  FormulaPtr body = fo::disj(fo::conj_all(parts), fo::neg(fo::conj_all(parts)));
  FormulaPtr nested = body;
  for (unsigned i = width; i-- > 0;) nested = fo::forall({xs[i]}, fo::forall({ys[i]}, nested));
  return nested;
}

TEST(Budget, NodeLimitYieldsThirdVerdict) {
  FormulaPtr f = hard_sentence(12);
  for (Strategy s : {Strategy::Naive, Strategy::ShortCircuit, Strategy::Guarded, Strategy::QbfSearch}) {
    EvalOptions opts;
    opts.strategy = s;
    opts.budget.nodes = 50;
    EvalResult r = eval_sentence(f, opts);
    EXPECT_EQ(r.verdict, Verdict::BudgetExceeded) << to_string(s);
    EXPECT_FALSE(r.finished());
  }
  EXPECT_EQ(run(f, Strategy::Symbolic), Verdict::True);
}

TEST(Budget, TimeLimitYieldsThirdVerdict) {
  EvalOptions opts;
  opts.strategy = Strategy::Naive;
  opts.budget.time = std::chrono::milliseconds(1);
  EvalResult r = eval_sentence(hard_sentence(30), opts);
  EXPECT_EQ(r.verdict, Verdict::BudgetExceeded);
  EXPECT_LT(r.ms, 1000.0);
}

}  // namespace
}  // namespace tm2qbf
