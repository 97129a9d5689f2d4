#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "synthetic.hpp"
#include "wumkit/enrichment.hpp"
#include "wumkit/error.hpp"

using namespace wumkit;

namespace {

const ServiceRegistry& reg() { return ServiceRegistry::standard(); }

// The bundled sample row: 15 pageviews, 9 on gate and 6 on obis, 2 before
// login and 13 after, 730 s in total.
std::vector<PageviewEvent> sample_like_session() {
  std::vector<PageviewEvent> ev;
  const std::int64_t durations[15] = {50, 48, 49, 48, 49, 48, 49, 48, 49, 48, 49, 48, 49, 48, 50};
  const ServiceId services[15] = {1, 1, 1, 1, 1, 3, 3, 3, 1, 1, 3, 3, 1, 1, 3};
  std::int64_t t = 0;
  for (int i = 0; i < 15; ++i) {
    auto e = i < 2 ? testkit::pageview(100 + i, 77, t, services[i])
                   : testkit::user_pageview(100 + i, 77, t, services[i], 184922);
    e.page_duration = durations[i];
    e.page_load = 0.192;
    t += durations[i];
    ev.push_back(e);
  }
  ev.back().is_logout_event = true;
  ev.back().logout_kind = LogoutKind::secure_button;
  return ev;
}

}  // namespace

TEST_SUITE_BEGIN("enrichment");

TEST_CASE("grouping sorts by session, time and log id") {
  std::vector<PageviewEvent> ev = {testkit::pageview(5, 2, 10, 1), testkit::pageview(1, 1, 5, 2),
                                   testkit::pageview(3, 2, 0, 3), testkit::pageview(4, 2, 10, 4),
                                   testkit::pageview(2, 1, 0, 1)};
  const auto table = group_by_session(ev);
  REQUIRE(table.size() == 2);
  CHECK(table.event_count() == 5);
  CHECK(table[0].session_id == 1);
  CHECK(table[0].events[0].log_id == 2);
  CHECK(table[1].events[0].log_id == 3);
  CHECK(table[1].events[1].log_id == 4);
  CHECK(table[1].events[2].log_id == 5);
  CHECK(SessionTable{}.empty());
}

TEST_CASE("sample-like session aggregates") {
  const auto ev = sample_like_session();
  const SessionTable table(ev);
  const auto s = aggregate_session(table[0], reg(), {{184922, 16}});
  CHECK(s.total_session_duration == 730);
  CHECK(s.page_count == 15);
  CHECK(s.visitor_pageview == 2);
  CHECK(s.user_pageview == 13);
  CHECK(s.service_count == 2);
  CHECK(s.page_per_service == 7.5);
  CHECK(s.visited_service_ids == std::vector<ServiceId>{1, 3});
  CHECK(s.pages[0] == 9);
  CHECK(s.pages[2] == 6);
  CHECK(s.ratios[0] == doctest::Approx(0.6));
  CHECK(s.logins_during_period == 16);
  CHECK(s.user_id == 184922);
  CHECK(s.session_login_status == 1);
  CHECK(s.age_group == 1);
  CHECK(s.exit_type == ExitMethod::secure_button);
  CHECK(s.exit_srv_id == 3);
  CHECK(s.landing_srv_id == 1);
  CHECK(check_invariants(s, reg()).empty());
}

TEST_CASE("single visitor pageview") {
  const std::vector<PageviewEvent> ev = {testkit::pageview(1, 1, 0, 5)};
  const SessionTable table(ev);
  const auto s = aggregate_session(table[0], reg(), {});
  CHECK(s.page_count == 1);
  CHECK(s.session_login_status == 0);
  CHECK(s.user_id == 0);
  CHECK(s.logins_during_period == 0);
  CHECK(s.exit_type == ExitMethod::direct);
  CHECK(s.ratios[4] == 1.0);
  CHECK(check_invariants(s, reg()).empty());
}

TEST_CASE("warning-window exit") {
  auto ev = std::vector<PageviewEvent>{testkit::user_pageview(1, 1, 0, 2, 9),
                                       testkit::user_pageview(2, 1, 9, 2, 9)};
  ev[1].is_logout_event = true;
  ev[1].logout_kind = LogoutKind::warning_window;
  const SessionTable table(ev);
  CHECK(determine_exit(table[0]) == SessionExit{2, ExitMethod::warning_window});
}

TEST_CASE("unknown service during aggregation") {
  const std::vector<PageviewEvent> ev = {testkit::pageview(1, 1, 0, 99)};
  const SessionTable table(ev);
  CHECK_THROWS_AS(aggregate_session(table[0], reg(), {}), UnknownServiceError);
}

TEST_CASE("login counts match the nested-loop oracle") {
  const auto events = testkit::synthetic_events(1500, 21, 1);
  const auto expected = oracle::nested_loop_login_counts(events);
  std::vector<PageviewEvent> shuffled = events;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(5));
  const auto from_stream = compute_user_login_counts(shuffled);
  const auto from_table = compute_user_login_counts(SessionTable(events));
  CHECK(from_stream.size() == expected.size());
  CHECK(from_table == from_stream);
  for (const auto& [user, n] : expected) {
    REQUIRE(from_stream.contains(user));
    CHECK(from_stream.at(user) == n);
  }
}

TEST_CASE("aggregates match the rescan oracle") {
  auto events = testkit::synthetic_events(2000, 22, 1);
  const SessionTable table(events);
  const auto logins = compute_user_login_counts(table);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto g = table[i];
    const auto s = aggregate_session(g, reg(), logins);
    const auto f = oracle::rescan({g.events.begin(), g.events.end()});
    REQUIRE(s.page_count == f.page_count);
    CHECK(s.user_pageview == f.user_pageviews);
    CHECK(s.visitor_pageview == f.visitor_pageviews);
    CHECK(s.total_session_duration == f.total_duration);
    CHECK(s.total_page_load == doctest::Approx(f.total_load));
    CHECK(s.visited_service_ids == f.visited_in_order);
    CHECK(s.landing_srv_id == f.landing);
    CHECK(s.exit_srv_id == f.exit);
    CHECK(int(s.exit_type) == f.exit_type);
    for (const auto& [service, n] : f.pages) CHECK(s.pages[reg().position(service)] == n);
    CHECK(check_invariants(s, reg()).empty());
  }
}

TEST_CASE("parallel enrichment equals serial") {
  const SessionTable table(testkit::synthetic_events(5000, 23));
  const auto logins = compute_user_login_counts(table);
  const auto serial = enrich_sessions(table, reg(), logins, {}, 1);
  CHECK(enrich_sessions(table, reg(), logins, {}, 4) == serial);

  std::vector<EnrichedSession> streamed;
  enrich_streaming(
      table, reg(), logins, {},
      [&](const SessionGroup& g, const EnrichedSession& s) {
        CHECK(g.session_id == s.session_id);
        streamed.push_back(s);
      },
      3, 333);
  CHECK(streamed == serial);
}

TEST_CASE("enriched pageviews inherit session demographics") {
  const auto ev = sample_like_session();
  const SessionTable table(ev);
  const auto s = aggregate_session(table[0], reg(), {{184922, 16}});
  const auto pages = enrich_pageviews(table[0], s);
  REQUIRE(pages.size() == 15);
  for (const auto& p : pages) {
    CHECK(p.user_id == 184922);
    CHECK(p.age_group == s.age_group);
    CHECK(p.session_id == 77);
  }
  CHECK(pages[0].login_state == LoginState::visitor);
  CHECK(pages.back().is_logout_event);
}

TEST_CASE("custom age bounds") {
  const std::vector<PageviewEvent> ev = {testkit::user_pageview(1, 1, 0, 1, 3)};
  const SessionTable table(ev);
  CHECK(aggregate_session(table[0], reg(), {}, AgeGroupBounds{17, 20, 40}).age_group == 2);
}

TEST_SUITE_END();
