#include <benchmark/benchmark.h>

#include "machines.hpp"
#include "tm2qbf/render.hpp"
#include "tm2qbf/translator.hpp"

namespace tm2qbf::bench {
namespace {

void BM_Translate20(benchmark::State& state) {
  EncodingParams params = derive_params(walker(), alternating(static_cast<std::size_t>(state.range(0))));
  FormulaPtr omega = Encoder(params).omega();
  for (auto _ : state) benchmark::DoNotOptimize(translate_20(omega));
  state.counters["ratio"] =
      static_cast<double>(length_natural(translate_20(omega))) / static_cast<double>(length_natural(omega));
}
BENCHMARK(BM_Translate20)->RangeMultiplier(2)->Range(4, 32)->Unit(benchmark::kMillisecond);

void BM_Translate22(benchmark::State& state) {
  EncodingParams params = derive_params(walker(), alternating(static_cast<std::size_t>(state.range(0))));
  FormulaPtr omega = Encoder(params).omega();
  FormulaPtr n = fo::neg(fo::sim(term::var({'p', 0, 0}), term::var({'p', 1, 0})));
  for (auto _ : state) benchmark::DoNotOptimize(translate_22(omega, n));
}
BENCHMARK(BM_Translate22)->RangeMultiplier(2)->Range(4, 16)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace tm2qbf::bench
