#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "wumkit/rules.hpp"

using namespace wumkit;

static void BM_EncodeTransactions(benchmark::State& state) {
  const auto& s = bench::sessions(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_transactions(s, ServiceRegistry::standard()));
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(s.size()));
}
BENCHMARK(BM_EncodeTransactions)->Arg(100000)->Unit(benchmark::kMillisecond);

// Dense random rows over `items` items; min support in thousandths.
static void BM_Apriori(benchmark::State& state) {
  const int items = int(state.range(0));
  const double min_support = double(state.range(1)) / 1000.0;
  std::vector<std::string> labels;
  for (int i = 0; i < items; ++i) labels.push_back("s" + std::to_string(i));
  TransactionSet t(labels);
  std::mt19937_64 rng(1);
  for (int r = 0; r < 200000; ++r) {
    ItemMask row = 0;
    for (int i = 0; i < items; ++i) {
      if (rng() % 100 < 55) row |= ItemMask{1} << i;
    }
    t.add(row);
  }
  std::size_t found = 0;
  for (auto _ : state) {
    const auto f = apriori(t, min_support);
    found = f.size();
    benchmark::DoNotOptimize(generate_rules(f, 0.5));
  }
  state.counters["itemsets"] = double(found);
}
BENCHMARK(BM_Apriori)
    ->Args({10, 250})
    ->Args({16, 100})
    ->Args({20, 150})
    ->Unit(benchmark::kMillisecond);

static void BM_RuleMetrics(benchmark::State& state) {
  double a = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rule_metrics(a, 0.6, 0.25));
    a = a < 0.9 ? a + 1e-6 : 0.3;
  }
}
BENCHMARK(BM_RuleMetrics);
