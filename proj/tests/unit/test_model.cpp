#include <doctest.h>

#include "synthetic.hpp"
#include "wumkit/enrichment.hpp"
#include "wumkit/error.hpp"
#include "wumkit/model.hpp"

using namespace wumkit;

TEST_SUITE_BEGIN("model");

TEST_CASE("standard registry order and lookups") {
  const auto& r = ServiceRegistry::standard();
  REQUIRE(r.size() == 10);
  CHECK(r.name_at(0) == "gate");
  CHECK(r.name_at(9) == "quest");
  CHECK(r.position(3) == 2);
  CHECK(r.name_of(7) == "form");
  CHECK(*r.index_of("pbook") == 8);
  CHECK_FALSE(r.contains(11));
  CHECK_THROWS_AS(r.position(42), UnknownServiceError);
}

TEST_CASE("registry rejects bad catalogs") {
  CHECK_THROWS_AS(ServiceRegistry({{1, "a"}, {1, "b"}}), ConfigError);
  CHECK_THROWS_AS(ServiceRegistry({{1, "a"}, {2, "a"}}), ConfigError);
  CHECK_THROWS_AS(ServiceRegistry({{0, "a"}}), ConfigError);
  CHECK_THROWS_AS(ServiceRegistry({{1, "Gate"}}), ConfigError);
  CHECK_THROWS_AS(ServiceRegistry({{1, ""}}), ConfigError);
}

TEST_CASE("registry file parsing") {
  const auto r = ServiceRegistry::parse("id,name\n# portal\n5,alpha\n\n2, beta\r\n");
  REQUIRE(r.size() == 2);
  CHECK(r.id_at(0) == 5);
  CHECK(r.name_at(1) == "beta");
  CHECK_THROWS_AS(ServiceRegistry::parse("1,a\nx,b\n"), ParseError);
  CHECK_THROWS_AS(ServiceRegistry::parse("1 a\n"), ParseError);
}

TEST_CASE("resolve_service by name or id") {
  const auto& r = ServiceRegistry::standard();
  CHECK(resolve_service("mail", r) == 2);
  CHECK(resolve_service("10", r) == 10);
  CHECK(resolve_service(ServiceId{4}, r) == 4);
  try {
    resolve_service("webmail", r);
    FAIL("expected UnknownServiceError");
  } catch (const UnknownServiceError& e) {
    CHECK(e.token() == "webmail");
  }
  CHECK_THROWS_AS(resolve_service("0", r), UnknownServiceError);
  const ServiceRegistry empty(std::vector<Service>{});
  CHECK_THROWS_AS(resolve_service("gate", empty), ConfigError);
}

TEST_CASE("event validation") {
  auto ok = testkit::user_pageview(1, 1, 0, 1, 7);
  CHECK_FALSE(validate_event(ok).has_value());

  auto e = ok;
  e.page_duration = -1;
  REQUIRE(validate_event(e).has_value());
  CHECK(validate_event(e)->field == "page_duration");

  e = ok;
  e.is_logout_event = true;  // kind still none
  CHECK(validate_event(e)->field == "logout_kind");

  e = testkit::pageview(1, 1, 0, 1);
  e.is_logout_event = true;
  e.logout_kind = LogoutKind::secure_button;
  CHECK(validate_event(e)->field == "is_logout_event");

  e = ok;
  e.user_id = 0;
  CHECK(validate_event(e)->field == "user_id");

  e = ok;
  e.referer_type = 7;
  CHECK(validate_event(e)->field == "referer_type");

  e = ok;
  e.page_load = std::numeric_limits<double>::quiet_NaN();
  CHECK(validate_event(e)->field == "page_load");
}

TEST_CASE("age groups") {
  const AgeGroupBounds b;
  CHECK(b.group_of(0) == 1);
  CHECK(b.group_of(22) == 1);
  CHECK(b.group_of(23) == 2);
  CHECK(b.group_of(30) == 2);
  CHECK(b.group_of(45) == 3);
  CHECK(b.group_of(46) == 4);
}

TEST_CASE("regular termination covers both logout paths") {
  CHECK_FALSE(is_regular_termination(ExitMethod::direct));
  CHECK(is_regular_termination(ExitMethod::secure_button));
  CHECK(is_regular_termination(ExitMethod::warning_window));
  CHECK(to_string(ExitMethod::warning_window) == "warning_window");
}

TEST_CASE("invariant checker flags each corruption") {
  const auto& r = ServiceRegistry::standard();
  std::vector<PageviewEvent> events = {testkit::user_pageview(1, 9, 0, 1, 5),
                                       testkit::user_pageview(2, 9, 30, 3, 5),
                                       testkit::user_pageview(3, 9, 60, 3, 5)};
  const SessionTable table(events);
  const auto good = aggregate_session(table[0], r, {{5, 1}});
  REQUIRE(check_invariants(good, r).empty());

  auto s = good;
  s.page_count = 4;
  CHECK_FALSE(check_invariants(s, r).empty());

  s = good;
  s.visited[1] = 1;
  CHECK_FALSE(check_invariants(s, r).empty());

  s = good;
  s.ratios[0] = 0.5;
  CHECK_FALSE(check_invariants(s, r).empty());

  s = good;
  s.avg_page_duration += 0.1;
  CHECK_FALSE(check_invariants(s, r).empty());

  s = good;
  s.landing_srv_id = 2;
  CHECK_FALSE(check_invariants(s, r).empty());
  InvariantOptions loose;
  loose.check_service_membership = false;
  CHECK(check_invariants(s, r, loose).empty());

  s = good;
  s.session_login_status = 0;
  CHECK_FALSE(check_invariants(s, r).empty());

  s = good;
  s.visited_service_ids.push_back(1);
  CHECK_FALSE(check_invariants(s, r).empty());

  s = good;
  s.pages.pop_back();
  CHECK_FALSE(check_invariants(s, r).empty());
}

TEST_SUITE_END();
