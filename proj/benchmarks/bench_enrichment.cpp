#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "wumkit/report.hpp"

using namespace wumkit;

static void BM_GroupBySession(benchmark::State& state) {
  const auto& ev = bench::events(state.range(0));
  for (auto _ : state) {
    auto copy = ev;
    benchmark::DoNotOptimize(group_by_session(std::move(copy)).size());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(ev.size()));
}
BENCHMARK(BM_GroupBySession)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_EnrichSessions(benchmark::State& state) {
  const auto& t = bench::table(state.range(0));
  const auto logins = compute_user_login_counts(t);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        enrich_sessions(t, ServiceRegistry::standard(), logins, {}, unsigned(state.range(1))));
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(t.size()));
}
BENCHMARK(BM_EnrichSessions)
    ->Args({100000, 1})
    ->Args({100000, 0})
    ->Unit(benchmark::kMillisecond);

static void BM_LoginCounts(benchmark::State& state) {
  const auto& ev = bench::events(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compute_user_login_counts(ev));
  state.SetItemsProcessed(state.iterations() * std::int64_t(ev.size()));
}
BENCHMARK(BM_LoginCounts)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_AnalyzeTable(benchmark::State& state) {
  const auto& t = bench::table(state.range(0));
  PipelineConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(analyze_table(t, ServiceRegistry::standard(), config));
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(t.size()));
}
BENCHMARK(BM_AnalyzeTable)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_Generate(benchmark::State& state) {
  auto config = calibrate(default_generator_config());
  config.session_count = std::uint64_t(state.range(0));
  std::uint64_t n = 0;
  for (auto _ : state) {
    generate(config, [&](const PageviewEvent&) { ++n; });
  }
  benchmark::DoNotOptimize(n);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Generate)->Arg(100000)->Unit(benchmark::kMillisecond);
