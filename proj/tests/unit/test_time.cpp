#include <doctest.h>

#include "synthetic.hpp"
#include "wumkit/time.hpp"

using namespace wumkit;

TEST_SUITE_BEGIN("time");

TEST_CASE("formats") {
  const Timestamp t = testkit::at(0);
  CHECK(format_iso(t) == "2022-11-22 13:00:05");
  CHECK(format_log_datetime(t) == "22.11.2022 13:00");
  CHECK(format_pageview_datetime(t) == "22.11.2022 13:00:05");
}

TEST_CASE("iso parsing") {
  CHECK(parse_iso("2022-11-22 13:00:05") == testkit::at(0));
  CHECK(parse_iso("2022-11-22T13:00:05") == testkit::at(0));
  CHECK(parse_iso("2022-11-22") == testkit::at(-13 * 3600 - 5));
  CHECK_FALSE(parse_iso("2022-13-01").has_value());
  CHECK_FALSE(parse_iso("2022-02-30 00:00:00").has_value());
  CHECK_FALSE(parse_iso("22.11.2022").has_value());
  CHECK_FALSE(parse_iso("2022-11-22 25:00:00").has_value());
}

TEST_CASE("log datetime parsing truncates nothing it reads") {
  CHECK(parse_log_datetime("22.11.2022 13:00") == testkit::at(-5));
  CHECK(parse_log_datetime("22.11.2022 13:00:05") == testkit::at(0));
  CHECK_FALSE(parse_log_datetime("2022-11-22 13:00").has_value());
}

TEST_CASE("round trip over a leap day and year end") {
  for (const char* text : {"2024-02-29 23:59:59", "2022-12-31 00:00:00", "1999-01-01 12:34:56"}) {
    const auto t = parse_iso(text);
    REQUIRE(t.has_value());
    CHECK(format_iso(*t) == text);
  }
}

TEST_CASE("time range is inclusive") {
  const TimeRange r{testkit::at(0), testkit::at(10)};
  CHECK(r.contains(testkit::at(0)));
  CHECK(r.contains(testkit::at(10)));
  CHECK_FALSE(r.contains(testkit::at(11)));
}

TEST_SUITE_END();
