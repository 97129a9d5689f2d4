// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.
#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <streambuf>

#include "oracles.hpp"
#include "synthetic.hpp"
#include "wumkit/bounce.hpp"
#include "wumkit/csv.hpp"
#include "wumkit/enrichment.hpp"
#include "wumkit/io.hpp"
#include "wumkit/report.hpp"
#include "wumkit/rules.hpp"
#include "wumkit/synth.hpp"

using namespace wumkit;

namespace {

const std::filesystem::path kReferenceDir = WUMKIT_REFERENCE_DIR;

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fixed(double v, int decimals) { return csv::format_decimal(v, decimals); }

double peak_rss_mib() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return double(usage.ru_maxrss) / 1024.0;  // ru_maxrss is KiB on Linux
}

// Counts what would be written to disk without keeping it.
class NullBuffer : public std::streambuf {
 public:
  std::uint64_t bytes = 0;

 protected:
  int_type overflow(int_type c) override {
    ++bytes;
    return traits_type::not_eof(c);
  }
  std::streamsize xsputn(const char*, std::streamsize n) override {
    bytes += std::uint64_t(n);
    return n;
  }
};

// ---------------------------------------------------------------------------

Outcome sample_session() {
  Outcome o;
  std::ifstream in(kReferenceDir / "sample_session.csv");
  const auto rows = read_enriched_sessions(in, ServiceRegistry::standard());
  o.require(rows.size() == 1, "expected one sample row");
  if (rows.empty()) return o;
  const auto& s = rows.front();
  const std::string duration = fixed(double(s.total_session_duration) / s.page_count, 2);
  const std::string load = fixed(s.total_page_load / s.page_count, 2);
  const std::string per_service = fixed(double(s.page_count) / s.service_count, 2);
  o.require(duration == "48.67", "Avg_Page_Duration " + duration);
  o.require(fixed(s.avg_page_duration, 2) == duration, "stored Avg_Page_Duration differs");
  o.require(load == "0.19", "Avg_Page_Load " + load);
  o.require(fixed(s.avg_page_load, 2) == load, "stored Avg_Page_Load differs");
  o.require(per_service == "7.5", "Page_per_Service " + per_service);
  o.require(fixed(s.page_per_service, 2) == per_service, "stored Page_per_Service differs");
  o.require(s.page_count == 15 && s.visitor_pageview == 2 && s.user_pageview == 13,
            "Page_Count split " + std::to_string(s.page_count));
  if (o.passed) {
    o.detail = "Avg_Page_Duration " + duration + ", Avg_Page_Load " + load +
               ", Page_per_Service " + per_service + ", Page_Count 15 = 2 + 13";
  }
  return o;
}

Outcome bounce_shares() {
  Outcome o;
  const auto j = to_json(BounceStats::from_counts(156707, 1064209, 156707, 7882632));
  const auto share = [&](const char* key) { return fixed(j[key].get<double>(), 2); };
  o.require(share("session_share_single") == "12.84", "single " + share("session_share_single"));
  o.require(share("session_share_multi") == "87.16", "multi " + share("session_share_multi"));
  o.require(share("pageview_share_single") == "1.95", "pv single " + share("pageview_share_single"));
  o.require(share("pageview_share_multi") == "98.05", "pv multi " + share("pageview_share_multi"));
  if (o.passed) {
    o.detail = "sessions " + share("session_share_single") + "% / " +
               share("session_share_multi") + "%, pageviews " +
               share("pageview_share_single") + "% / " + share("pageview_share_multi") + "%";
  }
  return o;
}

Outcome chi_square_table() {
  struct Expect {
    std::string attribute;
    double statistic;
    double tolerance;  // statistic must lie within +-tolerance
    int dof;
    double p;
    double p_tolerance;
  };
  // Statistic and p-value bands; zero p-values are checked at 2 decimals.
  const std::vector<Expect> expected = {
      {"Browser_Type", 68.19, 0.05, 2, 0.0, 0.005},
      {"Referer_Type", 38.72, 0.05, 5, 0.0, 0.005},
      {"User_Language_TR", 0.0, 0.005, 1, 1.0, 0.03},
      {"User_Location", 0.12, 0.01, 2, 0.94, 0.01},
  };

  std::ifstream in(kReferenceDir / "client_attributes.csv");
  csv::Reader reader(in);
  std::vector<std::string_view> f;
  reader.next(f);  // header: attribute,category,label,single_page_pct,multi_page_pct
  std::vector<ContingencyTable> tables;
  while (reader.next(f)) {
    if (tables.empty() || tables.back().attribute != f[0]) {
      tables.emplace_back();
      tables.back().attribute = std::string(f[0]);
      tables.back().mode = TableMode::row_percentages;
    }
    tables.back().column_labels.emplace_back(f[1]);
    tables.back().cells[0].push_back(*csv::parse_number<double>(f[3]));
    tables.back().cells[1].push_back(*csv::parse_number<double>(f[4]));
  }

  Outcome o;
  std::string summary;
  for (const auto& e : expected) {
    const auto t = std::find_if(tables.begin(), tables.end(),
                                [&](const auto& x) { return x.attribute == e.attribute; });
    if (t == tables.end()) {
      o.require(false, e.attribute + " missing");
      continue;
    }
    const auto r = chi_square(*t, YatesPolicy::automatic);
    o.require(std::fabs(r.statistic - e.statistic) <= e.tolerance,
              e.attribute + " statistic " + fixed(r.statistic, 4));
    o.require(r.dof == e.dof, e.attribute + " dof " + std::to_string(r.dof));
    o.require(std::fabs(r.p_value - e.p) <= e.p_tolerance,
              e.attribute + " p " + fixed(r.p_value, 4));
    o.require(std::fabs(r.p_value - oracle::chi_square_sf(r.statistic, r.dof)) < 1e-6,
              e.attribute + " p disagrees with numerical integration");
    summary += (summary.empty() ? "" : ", ") + e.attribute + " " + fixed(r.statistic, 2) +
               " (dof " + std::to_string(r.dof) + ", p " + fixed(r.p_value, 2) + ")";
  }
  if (o.passed) o.detail = summary;
  return o;
}

Outcome rule_metric_table() {
  Outcome o;
  std::ifstream in(kReferenceDir / "reference_rules.csv");
  const auto rules = read_rules_csv(in);
  o.require(rules.size() == 30, std::to_string(rules.size()) + " rules in table");
  std::size_t exact = 0;
  for (const auto& r : rules) {
    const auto& pub = r.metrics;
    const auto m = rule_metrics_with_confidence(pub.antecedent_support, pub.consequent_support,
                                                pub.support, pub.confidence);
    const std::string name = r.antecedent.front() + " -> " + r.consequent.front();
    o.require(std::fabs(m.lift - pub.lift) <= 0.01, name + " lift " + fixed(m.lift, 4));
    o.require(std::fabs(m.leverage - pub.leverage) <= 0.002,
              name + " leverage " + fixed(m.leverage, 4));
    o.require(std::fabs(m.zhang - pub.zhang) <= 0.01, name + " zhang " + fixed(m.zhang, 4));
    if (pub.confidence >= 1.0) {
      ++exact;
      o.require(std::isinf(m.conviction) && m.conviction > 0, name + " conviction not infinite");
    } else if (pub.confidence <= 0.995) {
      o.require(std::fabs(m.conviction - pub.conviction) <= 0.1 * pub.conviction,
                name + " conviction " + fixed(m.conviction, 3));
    }
  }
  if (o.passed) {
    o.detail = std::to_string(rules.size()) + " rules within tolerance, " + std::to_string(exact) +
               " with infinite conviction";
  }
  return o;
}

Outcome apriori_oracle() {
  Outcome o;
  std::mt19937_64 rng(20221122);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t itemsets = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int items = 1 + int(rng() % 8);
    const std::size_t n = 1 + rng() % 200;
    const double density = 0.1 + 0.8 * unit(rng);
    std::vector<std::vector<bool>> rows(n, std::vector<bool>(items));
    std::vector<std::string> labels;
    for (int i = 0; i < items; ++i) labels.push_back("item" + std::to_string(i));
    TransactionSet t(labels);
    for (auto& row : rows) {
      for (int i = 0; i < items; ++i) row[i] = unit(rng) < density;
      t.add(row);
    }
    const double min_support =
        trial % 3 == 0 ? double(1 + rng() % n) / double(n) : std::max(1e-9, unit(rng));
    const auto expected = oracle::brute_force_itemsets(rows, items, min_support);
    const auto got = apriori(t, min_support);
    bool same = got.size() == expected.size();
    for (std::size_t i = 0; same && i < got.size(); ++i) {
      std::vector<int> positions;
      for (int b = 0; b < items; ++b) {
        if (got[i].mask >> b & 1) positions.push_back(b);
      }
      same = positions == expected[i].items && got[i].count == expected[i].count;
    }
    o.require(same, "set " + std::to_string(trial) + " differs");
    itemsets += expected.size();
  }
  if (o.passed) {
    o.detail = "200 random sets, " + std::to_string(itemsets) + " itemsets identical";
  }
  return o;
}

Outcome enrichment_invariants() {
  Outcome o;
  const auto& registry = ServiceRegistry::standard();
  auto events = testkit::synthetic_events(100000, 6);
  const std::size_t raw = events.size();
  const SessionTable table(std::move(events));
  const auto sessions =
      enrich_sessions(table, registry, compute_user_login_counts(table));

  std::size_t bad = 0;
  std::uint64_t pages = 0;
  for (const auto& s : sessions) {
    pages += s.page_count;
    if (!check_invariants(s, registry).empty()) ++bad;
  }
  o.require(sessions.size() == 100000, std::to_string(sessions.size()) + " sessions");
  o.require(bad == 0, std::to_string(bad) + " sessions violate an invariant");
  o.require(pages == raw, "sum of Page_Count " + std::to_string(pages) + " vs " +
                              std::to_string(raw) + " events");

  // The same must hold after a trip through the dataset format.
  std::stringstream buf;
  write_enriched_sessions(sessions, registry, buf);
  InvariantOptions serialized;
  serialized.average_tolerance = kSerializedAverageTolerance;
  std::size_t bad_serialized = 0;
  EnrichedSessionReader reader(buf, registry);
  while (auto s = reader.next()) bad_serialized += !check_invariants(*s, registry, serialized).empty();
  o.require(bad_serialized == 0, std::to_string(bad_serialized) + " serialized rows fail");

  if (o.passed) {
    o.detail = "100000/100000 sessions consistent, sum of Page_Count = " + std::to_string(raw) +
               " events";
  }
  return o;
}

Outcome generator_recovery() {
  Outcome o;
  CalibrationTargets targets;
  targets.bounce_rate = 0.1284;
  targets.landing_share = {{"gate", 0.85}};
  targets.global_secure_exit_rate = 0.5;
  targets.service_secure_exit_rate = {{"obis", 0.75}, {"mail", 0.75}};
  auto config = calibrate(default_generator_config(), targets);
  config.session_count = 100000;
  config.seed = 7;

  // Full pipeline: export, read back, enrich and analyze.
  std::stringstream csv;
  EventWriter writer(csv);
  generate(config, [&](const PageviewEvent& e) { writer.write(e); });
  const auto& registry = config.registry;
  const SessionTable table(read_events(csv, registry));

  std::uint64_t gate_landings = 0;
  PipelineConfig pipeline;
  pipeline.analyses.chisq = false;
  pipeline.analyses.rules = false;
  const auto results =
      analyze_table(table, registry, pipeline, [&](const SessionGroup&, const EnrichedSession& s) {
        gate_landings += s.landing_srv_id == registry.id_at(0);
      });

  const double sessions = double(results.bounce->total_sessions);
  const auto& exits = *results.exits;
  const auto secure_rate = [&](const std::string& service) {
    const double secure = double(exits.count(service, "secure_exit"));
    return secure / (secure + double(exits.count(service, "direct_exit")));
  };
  const std::vector<std::pair<std::string, std::pair<double, double>>> stats = {
      {"bounce", {results.bounce->session_share_single / 100.0, 0.1284}},
      {"gate landing", {gate_landings / sessions, 0.85}},
      {"secure exit", {node_degree(exits, "secure_exit").in / sessions, 0.5}},
      {"obis secure exit", {secure_rate("obis"), 0.75}},
      {"mail secure exit", {secure_rate("mail"), 0.75}},
  };
  std::string summary;
  for (const auto& [name, pair] : stats) {
    const auto [got, target] = pair;
    o.require(std::fabs(got - target) <= 0.01,
              name + " " + fixed(100 * got, 2) + "% vs " + fixed(100 * target, 2) + "%");
    summary += (summary.empty() ? "" : ", ") + name + " " + fixed(100 * got, 2) + "%";
  }
  if (o.passed) o.detail = summary;
  return o;
}

Outcome throughput() {
  Outcome o;
  constexpr std::uint64_t kSessions = 1220916;
  const auto config = testkit::calibrated_config(kSessions, 2022);
  const auto& registry = config.registry;

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<PageviewEvent> events;
  events.reserve(kSessions * 15 / 2);
  generate(config, [&](const PageviewEvent& e) { events.push_back(e); });
  const std::size_t raw = events.size();
  const auto t1 = std::chrono::steady_clock::now();

  NullBuffer sink;
  std::ostream devnull(&sink);
  EnrichedSessionWriter sessions_out(devnull, registry);
  EnrichedPageviewWriter pages_out(devnull);
  std::vector<EnrichedPageview> pages;
  PipelineConfig pipeline;
  const SessionTable table(std::move(events));
  const auto results =
      analyze_table(table, registry, pipeline, [&](const SessionGroup& g, const EnrichedSession& s) {
        sessions_out.write(s);
        pages.clear();
        append_enriched_pageviews(g, s, pages);
        for (const auto& p : pages) pages_out.write(p);
      });
  const auto t2 = std::chrono::steady_clock::now();

  const double generate_s = std::chrono::duration<double>(t1 - t0).count();
  const double analyze_s = std::chrono::duration<double>(t2 - t1).count();
  const double rss = peak_rss_mib();
  o.require(results.bounce->total_sessions == kSessions, "session count");
  o.require(pages_out.count() == raw, "pageview rows");
  o.require(analyze_s < 300.0, "enrich + analyses took " + fixed(analyze_s, 1) + " s");
  o.require(rss < 2048.0, "peak RSS " + fixed(rss, 0) + " MiB");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(kSessions) + " sessions, " +
              std::to_string(raw) + " events, enrich + analyses " + fixed(analyze_s, 1) +
              " s (generation " + fixed(generate_s, 1) + " s), " +
              fixed(double(sink.bytes) / (1 << 20), 0) + " MiB of datasets, peak RSS " +
              fixed(rss, 0) + " MiB";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "sample session consistency", 1.0, sample_session},
      {2, "bounce shares", 1.0, bounce_shares},
      {3, "chi-square reproduction", 1.0, chi_square_table},
      {4, "rule metric consistency", 1.0, rule_metric_table},
      {5, "apriori oracle equivalence", 30.0, apriori_oracle},
      {6, "enrichment invariants", 60.0, enrichment_invariants},
      {7, "generator recovery", 120.0, generator_recovery},
      {8, "throughput", 300.0, throughput},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(seconds < c.budget_s, "over the " + fixed(c.budget_s, 0) + " s budget");
    failures += !o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << c.number << " (" << c.title
              << ", " << fixed(seconds, 2) << " s): " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
