#include <doctest.h>

#include <sstream>

#include "wumkit/csv.hpp"
#include "wumkit/error.hpp"

using namespace wumkit;

TEST_SUITE_BEGIN("csv");

TEST_CASE("reader splits quoted fields and skips blank lines") {
  std::istringstream in("a,b,c\r\n\n\"1,3\",\"say \"\"hi\"\"\",\n");
  csv::Reader reader(in);
  std::vector<std::string_view> f;
  REQUIRE(reader.next(f));
  CHECK(f == std::vector<std::string_view>{"a", "b", "c"});
  REQUIRE(reader.next(f));
  CHECK(reader.line_number() == 3);
  REQUIRE(f.size() == 3);
  CHECK(f[0] == "1,3");
  CHECK(f[1] == "say \"hi\"");
  CHECK(f[2].empty());
  CHECK_FALSE(reader.next(f));
}

TEST_CASE("unterminated quote is a parse error") {
  std::istringstream in("x\n\"open,1\n");
  csv::Reader reader(in);
  std::vector<std::string_view> f;
  REQUIRE(reader.next(f));
  CHECK_THROWS_AS(reader.next(f), ParseError);
}

TEST_CASE("number parsing is strict") {
  CHECK(csv::parse_number<int>("42") == 42);
  CHECK_FALSE(csv::parse_number<int>("42x").has_value());
  CHECK_FALSE(csv::parse_number<int>("").has_value());
  CHECK(csv::parse_number<double>("+0.5") == 0.5);
  CHECK(csv::parse_number<double>("1e-3") == 0.001);
  CHECK_FALSE(csv::parse_number<double>("0,5").has_value());
}

TEST_CASE("decimal formatting") {
  CHECK(csv::format_decimal(730.0 / 15.0, 2) == "48.67");
  CHECK(csv::format_decimal(7.5, 2) == "7.5");
  CHECK(csv::format_decimal(1.0, 4) == "1");
  CHECK(csv::format_decimal(0.0, 2) == "0");
  CHECK(csv::format_decimal(-0.001, 2) == "0");
  CHECK(csv::format_decimal(0.126, 2) == "0.13");
}

TEST_CASE("exact formatting round-trips") {
  for (const double v : {0.1, 1.0 / 3.0, 12.84, 1e-300, 123456789.125}) {
    CHECK(csv::parse_number<double>(csv::format_exact(v)) == v);
  }
}

TEST_CASE("escaping") {
  CHECK(csv::escape("plain") == "plain");
  CHECK(csv::escape("a,b") == "\"a,b\"");
  CHECK(csv::escape("q\"") == "\"q\"\"\"");
  CHECK(csv::join_row({"1", "x,y", ""}) == "1,\"x,y\",");
}

TEST_SUITE_END();
