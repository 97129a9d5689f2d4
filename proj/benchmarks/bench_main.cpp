#include <benchmark/benchmark.h>

#include <map>

#include "fixtures.hpp"

namespace bench {

namespace {

wumkit::GeneratorConfig config(std::uint64_t sessions) {
  auto c = wumkit::calibrate(wumkit::default_generator_config());
  c.session_count = sessions;
  c.seed = 42;
  return c;
}

}  // namespace

const std::vector<wumkit::PageviewEvent>& events(std::uint64_t n) {
  static std::map<std::uint64_t, std::vector<wumkit::PageviewEvent>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, wumkit::generate(config(n))).first;
  return it->second;
}

const wumkit::SessionTable& table(std::uint64_t n) {
  static std::map<std::uint64_t, wumkit::SessionTable> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, wumkit::SessionTable(events(n))).first;
  return it->second;
}

const std::vector<wumkit::EnrichedSession>& sessions(std::uint64_t n) {
  static std::map<std::uint64_t, std::vector<wumkit::EnrichedSession>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    const auto& t = table(n);
    it = cache
             .emplace(n, wumkit::enrich_sessions(t, wumkit::ServiceRegistry::standard(),
                                                 wumkit::compute_user_login_counts(t)))
             .first;
  }
  return it->second;
}

}  // namespace bench

BENCHMARK_MAIN();
