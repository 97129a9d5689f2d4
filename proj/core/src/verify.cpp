#include "wumkit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wumkit/bounce.hpp"
#include "wumkit/csv.hpp"
#include "wumkit/error.hpp"
#include "wumkit/io.hpp"
#include "wumkit/rules.hpp"

namespace wumkit {
namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError(1, 0, "missing column " + std::string(name));
    return static_cast<std::size_t>(it - header.begin());
  }
};

Table read_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  csv::Reader reader(in);
  std::vector<std::string_view> fields;
  Table t;
  if (!reader.next(fields)) throw ParseError(1, 0, "empty fixture");
  t.header.assign(fields.begin(), fields.end());
  while (reader.next(fields)) t.rows.emplace_back(fields.begin(), fields.end());
  return t;
}

double number(const std::string& text) {
  const auto v = csv::parse_number<double>(text);
  if (!v) throw ParseError(0, 0, "'" + text + "' is not a number");
  return *v;
}

std::string fmt(double v) { return csv::format_exact(v); }

VerifyCheck check(std::string group, std::string name, bool passed, std::string detail) {
  return {std::move(group), std::move(name), passed, std::move(detail)};
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

}  // namespace

bool VerifyReport::passed() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; }));
}

std::vector<VerifyCheck> verify_sample_session() {
  const std::string group = "sample_session";
  std::vector<VerifyCheck> out;
  const auto& registry = ServiceRegistry::standard();
  std::istringstream in{std::string(fixtures::sample_session())};
  const auto sessions = read_enriched_sessions(in, registry);
  if (sessions.size() != 1) {
    out.push_back(check(group, "row count", false,
                        "expected 1 row, got " + std::to_string(sessions.size())));
    return out;
  }
  const auto& s = sessions.front();

  InvariantOptions options;
  options.average_tolerance = kSerializedAverageTolerance;
  // The published row names a landing service outside its visited list.
  options.check_service_membership = false;
  const auto violations = check_invariants(s, registry, options);
  std::string joined;
  for (const auto& v : violations) joined += (joined.empty() ? "" : "; ") + v;
  out.push_back(check(group, "invariants", violations.empty(),
                      violations.empty() ? "all hold" : joined));

  const auto two_dp = [&](const char* name, double derived, double stored) {
    const std::string text = csv::format_decimal(derived, 2);
    const bool ok = text == csv::format_decimal(stored, 2);
    out.push_back(check(group, name, ok,
                        "derived " + text + ", stored " + csv::format_decimal(stored, 2)));
  };
  two_dp("Avg_Page_Duration", double(s.total_session_duration) / s.page_count,
         s.avg_page_duration);
  two_dp("Avg_Page_Load", s.total_page_load / s.page_count, s.avg_page_load);
  two_dp("Page_per_Service", double(s.page_count) / s.service_count, s.page_per_service);
  out.push_back(check(group, "Page_Count", s.page_count == s.visitor_pageview + s.user_pageview,
                      std::to_string(s.page_count) + " = " + std::to_string(s.visitor_pageview) +
                          " + " + std::to_string(s.user_pageview)));

  std::ostringstream written;
  write_enriched_sessions(sessions, registry, written);
  out.push_back(check(group, "round trip", written.str() == fixtures::sample_session(),
                      "re-serialized row matches the fixture byte for byte"));
  return out;
}

std::vector<VerifyCheck> verify_bounce_shares() {
  const std::string group = "bounce";
  std::vector<VerifyCheck> out;
  const Table t = read_table(fixtures::bounce_counts());
  for (const auto& row : t.rows) {
    const auto count = [&](const char* name) {
      return static_cast<std::uint64_t>(number(row[t.column(name)]));
    };
    const auto stats = BounceStats::from_counts(count("single_page_sessions"),
                                                count("multi_page_sessions"),
                                                count("single_page_pageviews"),
                                                count("multi_page_pageviews"));
    out.push_back(check(group, "total_sessions", stats.total_sessions == count("total_sessions"),
                        std::to_string(stats.total_sessions)));
    const auto j = to_json(stats);
    for (const char* key : {"session_share_single", "session_share_multi",
                            "pageview_share_single", "pageview_share_multi"}) {
      const double expected = number(row[t.column(key)]);
      const double got = j.at(key).get<double>();
      out.push_back(check(group, key, std::fabs(got - expected) < 1e-9,
                          "reported " + csv::format_decimal(got, 2) + ", expected " +
                              csv::format_decimal(expected, 2)));
    }
  }
  return out;
}

std::vector<VerifyCheck> verify_chi_square() {
  const std::string group = "chi_square";
  std::vector<VerifyCheck> out;
  const Table attrs = read_table(fixtures::client_attributes());
  const Table ref = read_table(fixtures::chi_square_reference());

  std::vector<ContingencyTable> tables;
  for (const auto& row : attrs.rows) {
    const auto& name = row[attrs.column("attribute")];
    if (tables.empty() || tables.back().attribute != name) {
      tables.push_back({});
      tables.back().attribute = name;
      tables.back().mode = TableMode::row_percentages;
    }
    auto& table = tables.back();
    table.column_labels.push_back(row[attrs.column("category")]);
    table.cells[0].push_back(number(row[attrs.column("single_page_pct")]));
    table.cells[1].push_back(number(row[attrs.column("multi_page_pct")]));
  }

  for (const auto& row : ref.rows) {
    const auto& name = row[ref.column("attribute")];
    const auto it = std::find_if(tables.begin(), tables.end(),
                                 [&](const auto& t) { return t.attribute == name; });
    if (it == tables.end()) {
      out.push_back(check(group, name, false, "attribute missing from the attribute table"));
      continue;
    }
    const auto r = chi_square(*it, YatesPolicy::automatic);
    const double stat = number(row[ref.column("chi2")]);
    const double p = number(row[ref.column("p_value")]);
    const int dof = static_cast<int>(number(row[ref.column("dof")]));
    // Published values carry two decimals; smaller statistics get a
    // tighter band so that a near-zero value cannot hide a wrong one.
    const double stat_tol = stat == 0.0 ? 0.005 : stat < 1.0 ? 0.01 : 0.05;
    out.push_back(check(group, name + " statistic", std::fabs(r.statistic - stat) <= stat_tol,
                        "computed " + fmt(r.statistic) + ", published " + row[ref.column("chi2")] +
                            (r.yates_applied ? " (Yates)" : "")));
    out.push_back(check(group, name + " dof", r.dof == dof,
                        "computed " + std::to_string(r.dof) + ", published " +
                            std::to_string(dof)));
    out.push_back(check(group, name + " p-value", std::fabs(r.p_value - p) <= 0.01,
                        "computed " + fmt(r.p_value) + ", published " +
                            row[ref.column("p_value")]));
  }
  return out;
}

std::vector<VerifyCheck> verify_rule_metrics() {
  const std::string group = "rule_metrics";
  std::vector<VerifyCheck> out;
  std::istringstream in{std::string(fixtures::reference_rules())};
  for (const auto& rule : read_rules_csv(in)) {
    const auto& pub = rule.metrics;
    const auto m = rule_metrics_with_confidence(pub.antecedent_support, pub.consequent_support,
                                                pub.support, pub.confidence);
    std::vector<std::string> problems;
    if (std::fabs(m.lift - pub.lift) > 0.01) problems.push_back("lift " + fmt(m.lift));
    if (std::fabs(m.leverage - pub.leverage) > 0.002) {
      problems.push_back("leverage " + fmt(m.leverage));
    }
    if (std::fabs(m.zhang - pub.zhang) > 0.01) problems.push_back("zhang " + fmt(m.zhang));
    if (pub.confidence >= 1.0) {
      if (!std::isinf(m.conviction) || !std::isinf(pub.conviction)) {
        problems.push_back("conviction should be infinite");
      }
    } else if (std::isinf(pub.conviction)) {
      problems.push_back("published conviction infinite below confidence 1");
    } else if (pub.confidence <= 0.995 &&
               std::fabs(m.conviction - pub.conviction) > 0.1 * pub.conviction) {
      problems.push_back("conviction " + fmt(m.conviction));
    }
    std::string detail = problems.empty() ? "within tolerance" : "";
    for (const auto& p : problems) detail += (detail.empty() ? "" : "; ") + p;
    out.push_back(check(group, join(rule.antecedent) + " -> " + join(rule.consequent),
                        problems.empty(), detail));
  }
  return out;
}

VerifyReport verify_reference_tables() {
  VerifyReport report;
  const auto run = [&](const std::string& group, auto fn) {
    try {
      for (auto& c : fn()) report.checks.push_back(std::move(c));
    } catch (const std::exception& e) {
      report.checks.push_back(check(group, "fixture", false, e.what()));
    }
  };
  run("sample_session", verify_sample_session);
  run("bounce", verify_bounce_shares);
  run("chi_square", verify_chi_square);
  run("rule_metrics", verify_rule_metrics);
  return report;
}

nlohmann::json to_json(const VerifyReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back(
        {{"group", c.group}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return {{"passed", report.passed()}, {"failures", report.failures()}, {"checks", checks}};
}

}  // namespace wumkit
