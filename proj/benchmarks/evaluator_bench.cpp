#include <benchmark/benchmark.h>

#include "machines.hpp"
#include "tm2qbf/evaluator.hpp"
#include "tm2qbf/qbf.hpp"

namespace tm2qbf::bench {
namespace {

EvalOptions symbolic(const EncodingParams& params) {
  EvalOptions opts;
  opts.strategy = Strategy::Symbolic;
  RecordLayout layout = params.layout();
  opts.order = [layout](const VarId& v) { return record_order_key(v, layout); };
  return opts;
}

// Ω for the alternator on "01" with zone exponent m.
void BM_OmegaSymbolic(benchmark::State& state) {
  EncodingParams params = derive_params(alternator(), alternating(2), static_cast<unsigned>(state.range(0)));
  FormulaPtr omega = Encoder(params).omega();
  EvalOptions opts = symbolic(params);
  for (auto _ : state) {
    EvalResult r = eval_sentence(omega, opts);
    benchmark::DoNotOptimize(r);
    state.counters["bdd_nodes"] = static_cast<double>(r.nodes);
  }
}
BENCHMARK(BM_OmegaSymbolic)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

// One-step sentence on the true successor, per strategy.
void BM_OneStep(benchmark::State& state) {
  EncodingParams params = derive_params(walker(), alternating(1), 1);
  Encoder enc(params);
  Configuration k0 = initial_configuration(params.input);
  Configuration k1 = step_once(params.program, k0);
  FormulaPtr f = enc.omega_s_sentence(k0, k1, 0);
  EvalOptions opts;
  opts.strategy = static_cast<Strategy>(state.range(0));
  state.SetLabel(std::string(to_string(opts.strategy)));
  for (auto _ : state) benchmark::DoNotOptimize(eval_sentence(f, opts));
}
BENCHMARK(BM_OneStep)
    ->Arg(static_cast<int>(Strategy::ShortCircuit))
    ->Arg(static_cast<int>(Strategy::Guarded))
    ->Arg(static_cast<int>(Strategy::Symbolic))
    ->Unit(benchmark::kMillisecond);

void BM_QcirRoundTrip(benchmark::State& state) {
  EncodingParams params = derive_params(walker(), alternating(2), 2);
  Circuit c = to_circuit(Encoder(params).omega());
  for (auto _ : state) benchmark::DoNotOptimize(parse_qcir(write_qcir(c)));
  state.counters["gates"] = static_cast<double>(c.size());
}
BENCHMARK(BM_QcirRoundTrip)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace tm2qbf::bench
