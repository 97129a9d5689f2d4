#include <doctest.h>

#include "synthetic.hpp"
#include "wumkit/verify.hpp"

using namespace wumkit;

TEST_SUITE_BEGIN("verify");

TEST_CASE("compiled fixtures equal the data files") {
  const std::filesystem::path dir = WUMKIT_REFERENCE_DIR;
  CHECK(fixtures::sample_session() == testkit::read_file(dir / "sample_session.csv"));
  CHECK(fixtures::bounce_counts() == testkit::read_file(dir / "bounce_counts.csv"));
  CHECK(fixtures::client_attributes() == testkit::read_file(dir / "client_attributes.csv"));
  CHECK(fixtures::chi_square_reference() == testkit::read_file(dir / "chi_square_reference.csv"));
  CHECK(fixtures::reference_rules() == testkit::read_file(dir / "reference_rules.csv"));
}

TEST_CASE("every reference check passes") {
  const auto report = verify_reference_tables();
  for (const auto& c : report.checks) {
    INFO(c.group << " / " << c.name << ": " << c.detail);
    CHECK(c.passed);
  }
  CHECK(report.passed());
  CHECK(verify_rule_metrics().size() == 30);
  CHECK(verify_chi_square().size() == 12);
  const auto j = to_json(report);
  CHECK(j["failures"] == 0);
  CHECK(j["checks"].size() == report.checks.size());
}

TEST_SUITE_END();
