#include <doctest.h>

#include "synthetic.hpp"
#include "wumkit/error.hpp"
#include "wumkit/report.hpp"

using namespace wumkit;

namespace {

const ServiceRegistry& reg() { return ServiceRegistry::standard(); }

}  // namespace

TEST_SUITE_BEGIN("report");

TEST_CASE("config validation") {
  PipelineConfig c;
  CHECK_NOTHROW(validate(c));
  c.min_support = 1.01;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = {};
  c.min_confidence = 0.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = {};
  c.significance = -0.1;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("pipeline config survives a JSON round trip") {
  PipelineConfig c;
  c.analyses.rules = false;
  c.min_support = 0.1;
  c.chisq_mode = TableMode::row_percentages;
  c.yates = YatesPolicy::off;
  c.normalization = Normalization::global;
  c.seed = 42;
  c.top_rules = 5;
  c.rule_ordering = RuleOrdering::zhang;
  c.relogin_pages = {1, 7};
  c.transactions.attribute_items = {parse_attribute("Browser_Type")};
  c.age_groups = {20, 35, 50};
  const auto back = pipeline_config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));

  const auto partial = pipeline_config_from_json({{"min_confidence", 0.5}});
  CHECK(partial.min_confidence == 0.5);
  CHECK(partial.min_support == PipelineConfig{}.min_support);

  CHECK_THROWS_AS(pipeline_config_from_json({{"min_suport", 0.1}}), ConfigError);
  CHECK_THROWS_AS(pipeline_config_from_json({{"min_support", 2.0}}), ConfigError);
  CHECK_THROWS_AS(pipeline_config_from_json({{"yates", "maybe"}}), ConfigError);
  CHECK_THROWS_AS(pipeline_config_from_json({{"analyses", {{"rulez", true}}}}), ConfigError);
  CHECK_THROWS_AS(pipeline_config_from_json({{"top_rules", "many"}}), ConfigError);
  CHECK_THROWS_AS(pipeline_config_from_json({{"attribute_items", {"Shoe_Size"}}}), ConfigError);
}

TEST_CASE("streaming analysis agrees with the batch functions") {
  const SessionTable table(testkit::synthetic_events(4000, 61, 1));
  PipelineConfig config;
  config.min_support = 0.05;
  config.min_confidence = 0.3;
  config.threads = 2;
  std::vector<EnrichedSession> sessions;
  const auto r = analyze_table(table, reg(), config,
                               [&](const SessionGroup&, const EnrichedSession& s) {
                                 sessions.push_back(s);
                               });
  REQUIRE(sessions.size() == table.size());
  REQUIRE(r.bounce);
  CHECK(to_json(*r.bounce) == to_json(bounce_summary(sessions)));
  REQUIRE(r.exits);
  CHECK(*r.exits == build_exit_graph(table, reg()));
  REQUIRE(r.transitions);
  CHECK(*r.transitions == build_transition_graph(table, reg()));
  REQUIRE(r.chisq);
  CHECK(r.chisq->size() == 4);
  REQUIRE(r.rules);
  const auto t = encode_transactions(sessions, reg());
  CHECK(r.rules->transactions == t.size());
  CHECK(r.rules->itemsets == apriori(t, 0.05));
  CHECK(r.rules->rules == generate_rules(r.rules->itemsets, 0.3));
  CHECK(r.rules->top.size() == std::min<std::size_t>(30, r.rules->rules.size()));
}

TEST_CASE("disabled analyses are null in the summary") {
  const SessionTable table(testkit::synthetic_events(500, 62, 1));
  PipelineConfig config;
  config.analyses.rules = false;
  config.analyses.chisq = false;
  const auto r = analyze_table(table, reg(), config);
  CHECK_FALSE(r.rules.has_value());
  const auto j = emit_summary(r, config);
  CHECK(j["rules"].is_null());
  CHECK(j["chisq"].is_null());
  CHECK(j["bounce"].is_object());
  CHECK(j["tool"]["version"] == std::string(tool_version()));
  CHECK(j["assumptions"]["transition_counting"] == "pageview_pairs");
  CHECK(j["config"]["min_support"] == 0.25);
}

TEST_CASE("summary is byte-stable across thread counts") {
  const SessionTable table(testkit::synthetic_events(3000, 63));
  PipelineConfig one;
  one.threads = 1;
  one.min_support = 0.1;
  PipelineConfig four = one;
  four.threads = 4;
  CHECK(emit_summary(analyze_table(table, reg(), one), one).dump(2) ==
        emit_summary(analyze_table(table, reg(), four), one).dump(2));
}

TEST_CASE("session-only input skips transitions") {
  const SessionTable table(testkit::synthetic_events(300, 64, 1));
  const auto sessions = enrich_sessions(table, reg(), compute_user_login_counts(table));
  PipelineConfig config;
  SessionAnalyzer analyzer(reg(), config);
  for (const auto& s : sessions) analyzer.add(s);
  const auto r = analyzer.finish();
  CHECK_FALSE(r.transitions.has_value());
  CHECK(r.exits.has_value());
  CHECK(r.bounce->total_sessions == sessions.size());
}

TEST_CASE("degenerate attribute is reported, not thrown") {
  std::vector<PageviewEvent> ev = {testkit::pageview(1, 1, 0, 1), testkit::pageview(2, 2, 0, 1),
                                   testkit::pageview(3, 2, 5, 2)};
  PipelineConfig config;
  config.analyses.rules = false;
  const auto r = analyze_table(SessionTable(ev), reg(), config);
  REQUIRE(r.chisq);
  for (const auto& e : *r.chisq) {
    CHECK_FALSE(e.result.has_value());
    CHECK_FALSE(e.error.empty());
  }
  CHECK(to_json(*r.chisq)[0].contains("error"));
}

TEST_SUITE_END();
