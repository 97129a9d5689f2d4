#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "synthetic.hpp"
#include "wumkit/bounce.hpp"
#include "wumkit/enrichment.hpp"
#include "wumkit/error.hpp"

using namespace wumkit;

namespace {

ContingencyTable table2(std::string name, std::vector<double> single, std::vector<double> multi) {
  ContingencyTable t;
  t.attribute = std::move(name);
  for (std::size_t i = 0; i < single.size(); ++i) t.column_labels.push_back(std::to_string(i + 1));
  t.cells = {std::move(single), std::move(multi)};
  return t;
}

}  // namespace

TEST_SUITE_BEGIN("bounce");

TEST_CASE("shares from counts") {
  const auto s = BounceStats::from_counts(156707, 1064209, 156707, 7882632);
  CHECK(s.total_sessions == 1220916);
  const auto j = to_json(s);
  CHECK(j["session_share_single"] == 12.84);
  CHECK(j["session_share_multi"] == 87.16);
  CHECK(j["pageview_share_single"] == 1.95);
  CHECK(j["pageview_share_multi"] == 98.05);
  CHECK(s.session_share_single + s.session_share_multi == doctest::Approx(100.0));
}

TEST_CASE("empty stream gives zero shares") {
  const auto s = BounceCounter{}.result();
  CHECK(s.total_sessions == 0);
  CHECK(s.session_share_single == 0.0);
  CHECK(s.pageview_share_multi == 0.0);
}

TEST_CASE("counter matches a direct count") {
  BounceCounter c;
  std::uint64_t single = 0, multi = 0, pages = 0;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const std::uint32_t n = 1 + rng() % 5;
    c.add(n);
    (n == 1 ? single : multi) += 1;
    if (n > 1) pages += n;
  }
  const auto s = c.result();
  CHECK(s.single_page_sessions == single);
  CHECK(s.multi_page_sessions == multi);
  CHECK(s.single_page_pageviews == single);
  CHECK(s.multi_page_pageviews == pages);
}

TEST_CASE("round_to is half away from zero") {
  CHECK(round_to(2.345, 2) == doctest::Approx(2.35));
  CHECK(round_to(-1.005, 1) == doctest::Approx(-1.0));
  CHECK(round_to(12.835, 2) == doctest::Approx(12.84));
}

TEST_CASE("attribute names") {
  CHECK(parse_attribute("Browser_Type") == SessionAttribute::browser_type);
  CHECK(to_string(SessionAttribute::user_language_tr) == "User_Language_TR");
  CHECK_THROWS_AS(parse_attribute("Shoe_Size"), UnknownAttributeError);
}

TEST_CASE("chi-square statistic matches the textbook formula") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t cols = 2 + rng() % 5;
    std::vector<double> a(cols), b(cols);
    for (std::size_t i = 0; i < cols; ++i) {
      a[i] = 1 + double(rng() % 500);
      b[i] = 1 + double(rng() % 500);
    }
    const auto t = table2("X", a, b);
    const auto r = chi_square(t, YatesPolicy::automatic);
    CHECK(r.dof == int(cols) - 1);
    CHECK(r.yates_applied == (cols == 2));
    CHECK(r.statistic == doctest::Approx(oracle::pearson_statistic({a, b}, cols == 2)));
    CHECK(r.p_value == doctest::Approx(oracle::chi_square_sf(r.statistic, r.dof)).epsilon(1e-6));
  }
}

TEST_CASE("yates policy") {
  const auto t = table2("X", {10, 20}, {30, 5});
  const auto off = chi_square(t, YatesPolicy::off);
  const auto on = chi_square(t, YatesPolicy::on);
  CHECK_FALSE(off.yates_applied);
  CHECK(on.yates_applied);
  CHECK(on.statistic < off.statistic);
  const auto three = table2("Y", {10, 20, 5}, {30, 5, 5});
  CHECK_FALSE(chi_square(three, YatesPolicy::automatic).yates_applied);
  CHECK(chi_square(three, YatesPolicy::on).yates_applied);
  CHECK(parse_yates_policy("auto") == YatesPolicy::automatic);
  CHECK_THROWS_AS(parse_yates_policy("yes"), ConfigError);
}

TEST_CASE("identical rows give zero statistic and p 1") {
  const auto r = chi_square(table2("X", {50, 50}, {50, 50}));
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
}

TEST_CASE("all-zero columns are dropped") {
  const auto r = chi_square(table2("X", {10, 0, 30}, {20, 0, 5}), YatesPolicy::off);
  CHECK(r.dof == 1);
  CHECK(r.dropped_columns == std::vector<std::string>{"2"});
  CHECK(r.columns == std::vector<std::string>{"1", "3"});
  CHECK(r.statistic == doctest::Approx(oracle::pearson_statistic({{10, 30}, {20, 5}}, false)));
}

TEST_CASE("degenerate tables") {
  CHECK_THROWS_AS(chi_square(table2("X", {10, 0}, {20, 0})), DegenerateTableError);
  CHECK_THROWS_AS(chi_square(table2("X", {0, 0}, {20, 3})), DegenerateTableError);
  CHECK_THROWS_AS(chi_square(table2("X", {-1, 4}, {20, 3})), DegenerateTableError);
  auto ragged = table2("X", {1, 2}, {3, 4});
  ragged.cells[1].pop_back();
  CHECK_THROWS_AS(chi_square(ragged), DegenerateTableError);
}

TEST_CASE("row percentages") {
  const auto t = to_row_percentages(table2("X", {1, 3}, {2, 2}));
  CHECK(t.mode == TableMode::row_percentages);
  CHECK(t.cells[0][0] == doctest::Approx(25.0));
  CHECK(t.cells[1][1] == doctest::Approx(50.0));
}

TEST_CASE("contingency counter over sessions") {
  const SessionTable table(testkit::synthetic_events(3000, 31, 1));
  const auto sessions =
      enrich_sessions(table, ServiceRegistry::standard(), compute_user_login_counts(table));
  const auto t = contingency_table(sessions, "Browser_Type", TableMode::counts);
  double single = 0, multi = 0;
  for (std::size_t c = 0; c < t.columns(); ++c) {
    single += t.cells[0][c];
    multi += t.cells[1][c];
  }
  const auto stats = bounce_summary(sessions);
  CHECK(single == double(stats.single_page_sessions));
  CHECK(multi == double(stats.multi_page_sessions));

  ContingencyCounter left(SessionAttribute::referer_type), right(SessionAttribute::referer_type),
      all(SessionAttribute::referer_type);
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    (i % 2 ? left : right).add(sessions[i]);
    all.add(sessions[i]);
  }
  left.merge(right);
  CHECK(to_json(left.table(TableMode::counts)) == to_json(all.table(TableMode::counts)));
  CHECK_THROWS_AS(contingency_table(sessions, "Nope", TableMode::counts), UnknownAttributeError);
}

TEST_SUITE_END();
