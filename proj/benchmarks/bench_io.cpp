#include <benchmark/benchmark.h>

#include <sstream>

#include "fixtures.hpp"
#include "wumkit/io.hpp"

using namespace wumkit;

static void BM_ReadEvents(benchmark::State& state) {
  const auto& ev = bench::events(state.range(0));
  std::ostringstream out;
  write_events(ev, out);
  const std::string text = out.str();
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(read_events(in, ServiceRegistry::standard()));
  }
  state.SetBytesProcessed(state.iterations() * std::int64_t(text.size()));
  state.SetItemsProcessed(state.iterations() * std::int64_t(ev.size()));
}
BENCHMARK(BM_ReadEvents)->Arg(20000)->Unit(benchmark::kMillisecond);

static void BM_WriteSessions(benchmark::State& state) {
  const auto& s = bench::sessions(state.range(0));
  std::size_t bytes = 0;
  for (auto _ : state) {
    std::ostringstream out;
    write_enriched_sessions(s, ServiceRegistry::standard(), out);
    bytes = out.str().size();
  }
  state.SetBytesProcessed(state.iterations() * std::int64_t(bytes));
}
BENCHMARK(BM_WriteSessions)->Arg(20000)->Unit(benchmark::kMillisecond);

static void BM_ReadSessions(benchmark::State& state) {
  const auto& s = bench::sessions(state.range(0));
  std::ostringstream out;
  write_enriched_sessions(s, ServiceRegistry::standard(), out);
  const std::string text = out.str();
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(read_enriched_sessions(in, ServiceRegistry::standard()));
  }
  state.SetBytesProcessed(state.iterations() * std::int64_t(text.size()));
}
BENCHMARK(BM_ReadSessions)->Arg(20000)->Unit(benchmark::kMillisecond);
