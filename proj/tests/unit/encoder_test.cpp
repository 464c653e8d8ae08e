#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <set>

#include "generators.hpp"
#include "tm2qbf/encoder.hpp"
#include "tm2qbf/evaluator.hpp"
#include "tm2qbf/render.hpp"

namespace tm2qbf {
namespace {

using testing::corpus_params;
using testing::record_assignment;
using testing::record_values;

Assignment merge(Assignment a, const Assignment& b) {
  a.insert(b.begin(), b.end());
  return a;
}

bool holds(const FormulaPtr& f, const Assignment& env, Strategy s = Strategy::Guarded) {
  EvalOptions opts;
  opts.strategy = s;
  EvalResult r = eval_formula(f, env, opts);
  EXPECT_TRUE(r.finished());
  return r.value();
}

EvalOptions symbolic(const EncodingParams& p) {
  EvalOptions opts;
  opts.strategy = Strategy::Symbolic;
  RecordLayout layout = p.layout();
  opts.order = [layout](const VarId& v) { return record_order_key(v, layout); };
  return opts;
}

TEST(Params, DerivedFromProgramAndInput) {
  EncodingParams p = corpus_params("walker", "01", 2);
  EXPECT_EQ(p.n, 2u);
  EXPECT_EQ(p.T, 4u);
  EXPECT_EQ(p.r, 2u);  // four symbols plus states up to 1 need three bits
  EXPECT_EQ(p.layout().width(), 2u * 3 + 3u * 3);
  EXPECT_EQ(p.symbol_code(kZero).size(), 3u);
  EXPECT_EQ(p.address(4).size(), 3u);
  EXPECT_EQ(minimal_code_width(4, 3), 2u);
  EXPECT_EQ(minimal_code_width(4, 4), 2u);
  EXPECT_EQ(minimal_code_width(4, 5), 3u);
}

TEST(Params, ZoneMustHoldTheInput) {
  EXPECT_THROW(corpus_params("walker", "0101", 1), EncodingError);
  EXPECT_NO_THROW(corpus_params("walker", "01", 1));
  EXPECT_THROW(corpus_params("walker", "", kMaxZoneExponent + 1), EncodingError);
  Program walker = prepare_program(testing::load_program("walker"));
  EXPECT_EQ(derive_params(walker, testing::word(walker, "01")).m, 2u);
}

TEST(Params, ZoneExponentZeroCannotHoldTwoSymbols) {
  EXPECT_THROW(corpus_params("walker", "01", 0), EncodingError);
  EXPECT_NO_THROW(corpus_params("walker", "0", 0));
}

TEST(Params, CodeMapsAreInjective) {
  EncodingParams p = corpus_params("bit-flipper", "01", 2);
  std::set<std::vector<bool>> symbols;
  for (std::size_t a = 0; a < p.program.alphabet.size(); ++a) {
    std::vector<bool> bits;
    for (const auto& t : p.symbol_code(static_cast<Symbol>(a))) bits.push_back(t->kind == TermKind::One);
    EXPECT_TRUE(symbols.insert(bits).second);
  }
  std::set<std::vector<bool>> states;
  for (State q = 0; q <= p.program.max_state(); ++q) {
    std::vector<bool> bits;
    for (const auto& t : p.state_code(q)) bits.push_back(t->kind == TermKind::One);
    EXPECT_TRUE(states.insert(bits).second);
  }
}

TEST(Records, LayoutAndOrderKey) {
  RecordLayout layout{2, 2};
  RecordVars y = basic_record_vars(5, layout);
  EXPECT_EQ(y.all().size(), layout.width());
  EXPECT_EQ(y.x[0], (VarId{'x', 5, 0}));
  RecordVars v = flat_record_vars('v', 1, layout);
  EXPECT_EQ(v.q[0], (VarId{'v', 1, 3}));
  EXPECT_EQ(v.f.back(), (VarId{'v', 1, 14}));
  // Fields at the same position share a key prefix across colors and kinds.
  for (std::size_t i = 0; i < y.all().size(); ++i) {
    EXPECT_EQ(record_order_key(y.all()[i], layout) >> 32, record_order_key(v.all()[i], layout) >> 32);
  }
  EXPECT_LT(record_order_key(y.x.back(), layout), record_order_key(y.q.front(), layout));
  EXPECT_LT(record_order_key(y.d.back(), layout), record_order_key(y.f.front(), layout));
  EXPECT_EQ(record_order_key({'h', 3, 1}, layout) >> 32, record_order_key(y.f[1], layout) >> 32);
}

TEST(Chi0, AcceptsExactlyTheInitialSamples) {
  EncodingParams p = corpus_params("alternator", "01", 2);
  Encoder enc(p);
  Configuration k0 = initial_configuration(p.input);
  for (Index cell = 0; cell <= p.T; ++cell) {
    EXPECT_TRUE(holds(enc.chi0(), record_assignment(p, k0, 0, cell)));
  }
  // A wrong content code at cell 2 or a moved head is rejected.
  EXPECT_FALSE(holds(enc.chi0(), record_values(p, 0, 2, kStartState, 0, kStart, kZero)));
  EXPECT_FALSE(holds(enc.chi0(), record_values(p, 0, 1, kStartState, 1, kStart, kZero)));
  EXPECT_FALSE(holds(enc.chi0(), record_values(p, 0, 4, kStartState, 0, kStart, kOne)));
}

TEST(Clause, RendersAndIsVacuousAwayFromItsCell) {
  EncodingParams p = corpus_params("walker", "01", 1);
  ASSERT_EQ(p.r, 2u);
  Encoder enc(p);
  FormulaPtr f = enc.clause(enc.basic(0), p.address(2), p.symbol_code(kBlank));
  EXPECT_EQ(render_natural(f), "x0,0≈1∧x0,1≈0→f0,0≈0∧f0,1≈0∧f0,2≈0");
  for (Index x = 0; x < 4; ++x) {
    for (Index code = 0; code < 8; ++code) {
      bool expected = x != 2 || code == 0;
      EXPECT_EQ(holds(f, record_values(p, 0, x, kStartState, 0, kStart, code)), expected);
    }
  }
}

TEST(Timer, HoldsOnlyOnAFullMatch) {
  EncodingParams p = corpus_params("walker", "01", 1);
  Encoder enc(p);
  FormulaPtr f = enc.timer(enc.basic(0), p.symbol_code(kStart), p.state_code(kStartState), p.address(0));
  for (Index d = 0; d < 8; ++d) {
    for (Index q = 0; q < 8; ++q) {
      for (Index z = 0; z < 4; ++z) {
        bool expected = d == kStart && q == kStartState && z == 0;
        EXPECT_EQ(holds(f, record_values(p, 0, 3, static_cast<State>(q), z, static_cast<Symbol>(d), 1)), expected);
      }
    }
  }
}

TEST(ChiOmega, RendersTheAcceptCode) {
  Encoder enc(corpus_params("walker", "01", 1));
  EXPECT_EQ(render_natural(enc.chi_omega()), "q2,0≈0∧q2,1≈0∧q2,2≈1");
}

// Addresses have m + 1 bits, so samples may point past T. χ(0) forces blanks
// there while Ψ L(0) says nothing, hence the equivalence holds on the zone only.
TEST(Chi0, EquivalentToTheInitialConfigurationFormulaOnTheZone) {
  for (const char* input : {"", "0", "1", "01", "10", "0110"}) {
    for (unsigned m = 1; m <= 2; ++m) {
      if (std::string(input).size() > (1u << m)) continue;
      EncodingParams p = corpus_params("bit-flipper", input, m);
      Encoder enc(p);
      FormulaPtr a = enc.chi0();
      FormulaPtr b = enc.psi_config(initial_configuration(p.input), 0);
      const VarTuple y0 = enc.basic_vars(0).all();
      // Ψ L(0) only lists cells 0..T; addresses above T are outside the zone.
      FormulaPtr in_zone = fo::neg(lex_less(p.address(p.T), enc.basic(0).x));
      FormulaPtr iff = fo::conj(fo::implies(a, b), fo::implies(b, a));
      EvalResult r = eval_sentence(close_universally({y0}, fo::implies(in_zone, iff)), symbolic(p));
      ASSERT_TRUE(r.finished());
      EXPECT_TRUE(r.value()) << "'" << input << "' m=" << m;
      EvalResult forward = eval_sentence(close_universally({y0}, fo::implies(a, b)), symbolic(p));
      ASSERT_TRUE(forward.finished());
      EXPECT_TRUE(forward.value());
      EvalResult backward = eval_sentence(close_universally({y0}, fo::implies(b, a)), symbolic(p));
      ASSERT_TRUE(backward.finished());
      EXPECT_FALSE(backward.value());
    }
  }
}

TEST(Phi0, FreeVariablesAreTheTwoRecords) {
  EncodingParams p = corpus_params("bit-flipper", "0", 1);
  Encoder enc(p);
  VarSet expected;
  for (Index color : {Index{3}, Index{4}}) {
    for (const VarId& v : enc.basic_vars(color).all()) expected.insert(v);
  }
  EXPECT_EQ(free_vars(enc.phi0(enc.basic(3), enc.basic(4))), expected);
}

// Constants below were fitted on these programs and pinned; the checks guard
// against growth beyond the stated orders rather than exact sizes.
constexpr double kClauseFactor = 7;        // len ψ ≤ c·(m+r)
constexpr double kInstructionFactor = 14;  // len φ(k) ≤ c·len ψ for writes, c·m·len ψ for moves
constexpr double kStepFactor = 2;          // len Φ⁽⁰⁾ ≤ c·N·max_k len φ(k)
constexpr double kChi0Factor = 7;          // len χ(0) ≤ c·|X|·len ψ

EncodingParams length_params(const char* text, std::size_t input, unsigned m) {
  Program raw = parse_program(text);
  return derive_params(prepare_program(raw), Word(input, kZero), m);
}

TEST(Lengths, ClauseIsLinearInTheWidths) {
  for (const char* text : {"q0 > -> q0 R\n", "q0 > -> q40 R\n", "q0 > -> q900 R\n"}) {
    for (unsigned m = 1; m <= 16; ++m) {
      EncodingParams p = length_params(text, 1, m);
      Encoder enc(p);
      FormulaPtr psi = enc.clause(enc.basic(0), p.address(1), p.symbol_code(kBlank));
      EXPECT_LE(length_natural_noidx(psi), kClauseFactor * (m + p.r)) << "m=" << m << " r=" << p.r;
    }
  }
}

TEST(Lengths, InstructionAndStepFormulas) {
  const char* text = "q0 > -> q0 R\nq0 0 -> q3 1\nq3 1 -> q0 L\nq0 _ -> q1 _\n";
  for (unsigned m : {1u, 2u, 4u, 8u, 16u, 32u}) {
    EncodingParams p = length_params(text, 2, m);
    Encoder enc(p);
    const double psi = length_natural_noidx(enc.clause(enc.basic(0), p.address(1), p.symbol_code(kBlank)));
    std::size_t longest = 0;
    for (std::size_t k = 1; k <= enc.instruction_count(); ++k) {
      const std::size_t len = length_natural_noidx(enc.phi_k(k, enc.basic(0), enc.basic(1)));
      longest = std::max(longest, len);
      const bool moves = p.program.instructions[k - 1].action.kind != Action::Kind::Write;
      EXPECT_LE(len, kInstructionFactor * (moves ? m : 1) * psi) << "m=" << m << " k=" << k;
    }
    const std::size_t step = length_natural_noidx(enc.phi0(enc.basic(0), enc.basic(1)));
    EXPECT_LE(step, kStepFactor * enc.instruction_count() * longest) << "m=" << m;
  }
}

TEST(Lengths, Chi0IsLinearInTheInput) {
  for (std::size_t n : {1, 2, 4, 8, 16, 32, 64}) {
    EncodingParams p = length_params("q0 > -> q0 R\nq0 0 -> q0 R\nq0 _ -> q1 _\n", n, static_cast<unsigned>(n));
    Encoder enc(p);
    const double psi = length_natural_noidx(enc.clause(enc.basic(0), p.address(1), p.symbol_code(kBlank)));
    EXPECT_LE(length_natural_noidx(enc.chi0()), kChi0Factor * n * psi) << "|X|=" << n;
  }
}

// A move only constrains the successor when the source sample sits at the new
// head position, so truthful links put it there; writes accept any sample.
TEST(Phi0, HoldsOnTruthfulSteps) {
  for (const char* name : {"walker", "bit-flipper", "left-bouncer", "alternator"}) {
    EncodingParams p = corpus_params(name, "01", 2);
    Encoder enc(p);
    FormulaPtr link = enc.phi0(enc.basic(0), enc.basic(1));
    auto run = testing::run(p.program, p.input, 6);
    for (std::size_t t = 0; t + 1 < run.trace.size(); ++t) {
      const Configuration& from = run.trace[t];
      const Configuration& to = run.trace[t + 1];
      const Instruction* ins = p.program.find(from.state, from.scanned());
      ASSERT_NE(ins, nullptr);
      std::vector<Index> sources;
      if (ins->action.is_move()) {
        sources.push_back(to.head);
      } else {
        for (Index cell = 0; cell <= p.T; ++cell) sources.push_back(cell);
      }
      for (Index src : sources) {
        for (Index dst = 0; dst <= p.T; ++dst) {
          Assignment env = merge(record_assignment(p, from, 0, src), record_assignment(p, to, 1, dst));
          EXPECT_TRUE(holds(link, env)) << name << " step " << t << " samples " << static_cast<unsigned>(src)
                                        << "," << static_cast<unsigned>(dst);
        }
      }
    }
  }
}

TEST(Phi0, MoveFailsWhenTheSourceSampleIsAwayFromTheNewHead) {
  EncodingParams p = corpus_params("walker", "01", 2);
  Encoder enc(p);
  FormulaPtr link = enc.phi0(enc.basic(0), enc.basic(1));
  auto run = testing::run(p.program, p.input, 1);
  Assignment env = merge(record_assignment(p, run.trace[0], 0, 2), record_assignment(p, run.trace[1], 1, 2));
  EXPECT_FALSE(holds(link, env));
}

TEST(Phi0, RejectsAWrongSuccessorState) {
  EncodingParams p = corpus_params("bit-flipper", "0", 1);
  Encoder enc(p);
  FormulaPtr link = enc.phi0(enc.basic(0), enc.basic(1));
  auto run = testing::run(p.program, p.input, 3);
  for (std::size_t t = 0; t + 1 < run.trace.size(); ++t) {
    Configuration wrong = run.trace[t + 1];
    wrong.state = wrong.state == kRejectState ? kAcceptState : kRejectState;
    Assignment env = merge(record_assignment(p, run.trace[t], 0, 1), record_assignment(p, wrong, 1, 1));
    EXPECT_FALSE(holds(link, env)) << "step " << t;
  }
}

TEST(Omega, PrefixClosesBothEndRecords) {
  EncodingParams p = corpus_params("walker", "0", 1);
  Encoder enc(p);
  FormulaPtr f = enc.omega();
  ASSERT_EQ(f->kind, FormulaKind::ForAll);
  EXPECT_EQ(f->vars.size(), 2 * p.layout().width());
  EXPECT_EQ(f->vars.front(), (VarId{'x', 0, 0}));
  EXPECT_EQ(f->vars.back(), (VarId{'f', 2, static_cast<std::uint32_t>(p.layout().code_width() - 1)}));
  EXPECT_TRUE(is_closed(f));
  EXPECT_TRUE(no_shadowing(f));
}

TEST(Omega, AgreesWithTheSimulatorAtZoneExponentOne) {
  for (const char* name : {"walker", "immediate-reject", "accept-immediately", "bit-flipper"}) {
    for (const char* input : {"", "0", "1"}) {
      EncodingParams p = corpus_params(name, input, 1);
      Encoder enc(p);
      SimulationResult sim = simulate(p.program, p.input, static_cast<std::size_t>(p.T), false);
      EvalResult r = eval_sentence(enc.omega(), symbolic(p));
      ASSERT_TRUE(r.finished());
      EXPECT_EQ(r.value(), sim.outcome.accepted()) << name << " '" << input << "'";
    }
  }
}

// The copy subformula only relates samples of one cell, so a destination
// sample at an unrelated cell may carry any content code. Walker on '0' with
// m = 2 accepts at step 3, yet the chain below satisfies every link: the
// fabricated code 5 at cell 2 is read by the move at step 2, no instruction
// reads code 5, and the remaining links hold vacuously.
TEST(ConstructionGap, FabricatedContentBreaksTheWalkerChain) {
  EncodingParams p = corpus_params("walker", "0", 2);
  Encoder enc(p);
  ASSERT_EQ(p.T, 4u);
  SimulationResult sim = simulate(p.program, p.input, 4, false);
  EXPECT_EQ(sim.outcome, (Outcome{Outcome::Status::Accepted, 3}));

  const std::vector<std::array<Index, 5>> chain{
      {1, 0, 0, 1, 2}, {2, 0, 1, 2, 5}, {2, 0, 2, 5, 5}, {0, 0, 0, 5, 0}, {0, 0, 0, 0, 0}};
  auto at = [&](std::size_t t, Index color) {
    const auto& y = chain[t];
    return record_values(p, color, y[0], static_cast<State>(y[1]), y[2], static_cast<Symbol>(y[3]), y[4]);
  };
  FormulaPtr link = enc.phi0(enc.basic(0), enc.basic(1));
  for (std::size_t t = 0; t + 1 < chain.size(); ++t) {
    EXPECT_TRUE(holds(link, merge(at(t, 0), at(t + 1, 1)))) << "link " << t;
  }
  EXPECT_TRUE(holds(enc.chi0(), at(0, 0)));
  EXPECT_FALSE(holds(enc.chi_omega(), at(4, 4)));
  EvalOptions opts = symbolic(p);
  EvalResult compressed = eval_formula(enc.phi_s(2, enc.basic(0), enc.basic(4)), merge(at(0, 0), at(4, 4)), opts);
  ASSERT_TRUE(compressed.finished());
  EXPECT_TRUE(compressed.value());
  EvalResult whole = eval_sentence(enc.omega(), opts);
  ASSERT_TRUE(whole.finished());
  EXPECT_FALSE(whole.value());
}

// Same gap for a single step: walker on the empty word, step 0 to 1. The
// destination sample reports a '1' at cell 2, which K(1) does not have.
TEST(ConstructionGap, OneStepSentenceFailsOnTheTrueSuccessor) {
  EncodingParams p = corpus_params("walker", "", 1);
  Encoder enc(p);
  auto run = testing::run(p.program, p.input, 1);
  const Configuration& k0 = run.trace[0];
  const Configuration& k1 = run.trace[1];
  ASSERT_EQ(k1.head, 1u);
  Assignment y0 = record_assignment(p, k0, 0, 1);
  Assignment y1 = record_values(p, 1, 2, k1.state, 1, kBlank, kOne);
  EXPECT_TRUE(holds(enc.psi_config(k0, 0), y0));
  EXPECT_TRUE(holds(enc.phi0(enc.basic(0), enc.basic(1)), merge(y0, y1)));
  Configuration target = k1;
  EXPECT_FALSE(holds(enc.psi_config(target, 1), y1));
  EXPECT_FALSE(eval_sentence(enc.omega_s_sentence(k0, k1, 0)).value());
}

TEST(OmegaS, RejectsCorruptedSuccessors) {
  EncodingParams p = corpus_params("bit-flipper", "0", 1);
  Encoder enc(p);
  auto run = testing::run(p.program, p.input, 2);
  Configuration bad = run.trace[1];
  bad.state = kRejectState;
  EXPECT_FALSE(eval_sentence(enc.omega_s_sentence(run.trace[0], bad, 0)).value());
  bad = run.trace[1];
  bad.tape.resize(3, kBlank);
  bad.tape[1] = kOne;
  EXPECT_FALSE(eval_sentence(enc.omega_s_sentence(run.trace[0], bad, 0)).value());
  EXPECT_THROW(enc.omega_s(run.trace[0], run.trace[1], 2), EncodingError);
}

}  // namespace
}  // namespace tm2qbf
