#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "wumkit/bounce.hpp"
#include "wumkit/graphs.hpp"

using namespace wumkit;

static void BM_ChiSquarePValue(benchmark::State& state) {
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chi_square_p_value(x, int(state.range(0))));
    x = x < 200.0 ? x * 1.001 : 0.01;
  }
}
BENCHMARK(BM_ChiSquarePValue)->Arg(1)->Arg(5)->Arg(30);

static void BM_ContingencyAndTest(benchmark::State& state) {
  const auto& s = bench::sessions(state.range(0));
  for (auto _ : state) {
    for (const auto a : kClientAttributes) {
      ContingencyCounter c(a);
      for (const auto& row : s) c.add(row);
      benchmark::DoNotOptimize(chi_square(c.table(TableMode::counts)));
    }
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(s.size()));
}
BENCHMARK(BM_ContingencyAndTest)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_TransitionGraph(benchmark::State& state) {
  const auto& t = bench::table(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        build_transition_graph(t, ServiceRegistry::standard(), Normalization::per_source, {}, 1));
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(t.event_count()));
}
BENCHMARK(BM_TransitionGraph)->Arg(100000)->Unit(benchmark::kMillisecond);
