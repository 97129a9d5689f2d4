#include "wumkit/bounce.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "wumkit/error.hpp"
#include "wumkit/gamma.hpp"

namespace wumkit {
namespace {

double percent(std::uint64_t part, std::uint64_t whole) {
  return whole == 0 ? 0.0 : 100.0 * double(part) / double(whole);
}

struct AttributeName {
  SessionAttribute attribute;
  std::string_view name;
};

constexpr std::array<AttributeName, 11> kAttributeNames = {{
    {SessionAttribute::browser_type, "Browser_Type"},
    {SessionAttribute::referer_type, "Referer_Type"},
    {SessionAttribute::user_language_tr, "User_Language_TR"},
    {SessionAttribute::user_location, "User_Location"},
    {SessionAttribute::user_type, "User_Type"},
    {SessionAttribute::sex, "Sex"},
    {SessionAttribute::age_group, "Age_Group"},
    {SessionAttribute::session_login_status, "Session_Login_Status"},
    {SessionAttribute::exit_type, "Exit_Type"},
    {SessionAttribute::landing_srv_id, "Landing_Srv_ID"},
    {SessionAttribute::exit_srv_id, "Exit_Srv_ID"},
}};

}  // namespace

BounceStats BounceStats::from_counts(std::uint64_t single_sessions,
                                     std::uint64_t multi_sessions,
                                     std::uint64_t single_pageviews,
                                     std::uint64_t multi_pageviews) {
  BounceStats s;
  s.single_page_sessions = single_sessions;
  s.multi_page_sessions = multi_sessions;
  s.total_sessions = single_sessions + multi_sessions;
  s.single_page_pageviews = single_pageviews;
  s.multi_page_pageviews = multi_pageviews;
  const std::uint64_t pageviews = single_pageviews + multi_pageviews;
  s.session_share_single = percent(single_sessions, s.total_sessions);
  s.session_share_multi = percent(multi_sessions, s.total_sessions);
  s.pageview_share_single = percent(single_pageviews, pageviews);
  s.pageview_share_multi = percent(multi_pageviews, pageviews);
  return s;
}

void BounceCounter::add(std::uint32_t page_count) {
  if (page_count == 1) {
    ++single_;
  } else {
    ++multi_;
    multi_pageviews_ += page_count;
  }
}

BounceStats BounceCounter::result() const {
  // A single-page session contributes exactly one pageview.
  return BounceStats::from_counts(single_, multi_, single_, multi_pageviews_);
}

BounceStats bounce_summary(std::span<const EnrichedSession> sessions) {
  BounceCounter counter;
  for (const auto& s : sessions) counter.add(s);
  return counter.result();
}

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // Nudge by a few ulps so values printed as x.xx5 round away from zero.
  const double scaled = value * scale;
  return std::round(scaled * (1.0 + 4 * std::numeric_limits<double>::epsilon())) /
         scale;
}

nlohmann::json to_json(const BounceStats& s) {
  return nlohmann::json{
      {"total_sessions", s.total_sessions},
      {"single_page_sessions", s.single_page_sessions},
      {"multi_page_sessions", s.multi_page_sessions},
      {"single_page_pageviews", s.single_page_pageviews},
      {"multi_page_pageviews", s.multi_page_pageviews},
      {"session_share_single", round_to(s.session_share_single, 2)},
      {"session_share_multi", round_to(s.session_share_multi, 2)},
      {"pageview_share_single", round_to(s.pageview_share_single, 2)},
      {"pageview_share_multi", round_to(s.pageview_share_multi, 2)},
  };
}

std::string_view to_string(SessionAttribute a) noexcept {
  for (const auto& entry : kAttributeNames) {
    if (entry.attribute == a) return entry.name;
  }
  return "unknown";
}

SessionAttribute parse_attribute(std::string_view name) {
  for (const auto& entry : kAttributeNames) {
    if (entry.name == name) return entry.attribute;
  }
  throw UnknownAttributeError(std::string(name));
}

std::int64_t attribute_value(const EnrichedSession& s, SessionAttribute a) {
  switch (a) {
    case SessionAttribute::browser_type:
      return s.browser_type;
    case SessionAttribute::referer_type:
      return s.referer_type;
    case SessionAttribute::user_language_tr:
      return s.user_language_tr;
    case SessionAttribute::user_location:
      return s.user_location;
    case SessionAttribute::user_type:
      return s.user_type;
    case SessionAttribute::sex:
      return s.sex;
    case SessionAttribute::age_group:
      return s.age_group;
    case SessionAttribute::session_login_status:
      return s.session_login_status;
    case SessionAttribute::exit_type:
      return static_cast<std::int64_t>(s.exit_type);
    case SessionAttribute::landing_srv_id:
      return s.landing_srv_id;
    case SessionAttribute::exit_srv_id:
      return s.exit_srv_id;
  }
  return 0;
}

ContingencyTable to_row_percentages(const ContingencyTable& table) {
  ContingencyTable out = table;
  out.mode = TableMode::row_percentages;
  for (auto& row : out.cells) {
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    for (auto& cell : row) cell = total > 0.0 ? 100.0 * cell / total : 0.0;
  }
  return out;
}

void ContingencyCounter::add(const EnrichedSession& s) {
  const std::size_t row = s.page_count == 1 ? 0 : 1;
  ++counts_[attribute_value(s, attribute_)][row];
}

void ContingencyCounter::merge(const ContingencyCounter& other) {
  for (const auto& [category, rows] : other.counts_) {
    auto& mine = counts_[category];
    mine[0] += rows[0];
    mine[1] += rows[1];
  }
}

ContingencyTable ContingencyCounter::table(TableMode mode) const {
  ContingencyTable t;
  t.attribute = std::string(to_string(attribute_));
  t.mode = TableMode::counts;
  for (const auto& [category, rows] : counts_) {
    t.column_labels.push_back(std::to_string(category));
    t.cells[0].push_back(double(rows[0]));
    t.cells[1].push_back(double(rows[1]));
  }
  return mode == TableMode::counts ? t : to_row_percentages(t);
}

ContingencyTable contingency_table(std::span<const EnrichedSession> sessions,
                                   std::string_view attribute, TableMode mode) {
  ContingencyCounter counter(parse_attribute(attribute));
  for (const auto& s : sessions) counter.add(s);
  return counter.table(mode);
}

YatesPolicy parse_yates_policy(std::string_view text) {
  if (text == "auto") return YatesPolicy::automatic;
  if (text == "on") return YatesPolicy::on;
  if (text == "off") return YatesPolicy::off;
  throw ConfigError("yates policy must be auto, on or off; got '" +
                    std::string(text) + "'");
}

std::string_view to_string(YatesPolicy p) noexcept {
  switch (p) {
    case YatesPolicy::automatic:
      return "auto";
    case YatesPolicy::on:
      return "on";
    case YatesPolicy::off:
      return "off";
  }
  return "auto";
}

ChiSquareResult chi_square(const ContingencyTable& table, YatesPolicy yates) {
  if (table.cells[0].size() != table.columns() ||
      table.cells[1].size() != table.columns()) {
    throw DegenerateTableError("contingency table rows do not match its columns");
  }
  ChiSquareResult r;
  r.attribute = table.attribute;

  std::vector<std::size_t> kept;
  for (std::size_t c = 0; c < table.columns(); ++c) {
    const double a = table.cells[0][c];
    const double b = table.cells[1][c];
    if (a < 0.0 || b < 0.0 || !std::isfinite(a) || !std::isfinite(b)) {
      throw DegenerateTableError("contingency cells must be finite and non-negative");
    }
    if (a == 0.0 && b == 0.0) {
      r.dropped_columns.push_back(table.column_labels[c]);
    } else {
      kept.push_back(c);
      r.columns.push_back(table.column_labels[c]);
    }
  }
  if (kept.size() < 2) {
    throw DegenerateTableError("attribute " + table.attribute +
                               " has fewer than two non-empty categories");
  }

  std::array<double, 2> row_total{0.0, 0.0};
  std::vector<double> col_total(kept.size(), 0.0);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    for (std::size_t row = 0; row < 2; ++row) {
      const double o = table.cells[row][kept[k]];
      row_total[row] += o;
      col_total[k] += o;
    }
  }
  if (row_total[0] == 0.0 || row_total[1] == 0.0) {
    throw DegenerateTableError("attribute " + table.attribute +
                               " has an empty bounce class row");
  }
  const double grand = row_total[0] + row_total[1];

  r.dof = static_cast<int>(kept.size()) - 1;
  r.yates_applied = yates == YatesPolicy::on ||
                    (yates == YatesPolicy::automatic && r.dof == 1);

  for (std::size_t row = 0; row < 2; ++row) {
    r.contributions[row].resize(kept.size());
    for (std::size_t k = 0; k < kept.size(); ++k) {
      const double observed = table.cells[row][kept[k]];
      const double expected = row_total[row] * col_total[k] / grand;
      double deviation = std::fabs(observed - expected);
      if (r.yates_applied) deviation = std::max(0.0, deviation - 0.5);
      const double contribution = deviation * deviation / expected;
      r.contributions[row][k] = contribution;
      r.statistic += contribution;
    }
  }
  r.p_value = chi_square_p_value(r.statistic, r.dof);
  return r;
}

double chi_square_p_value(double statistic, int dof) {
  if (dof < 1) throw DomainError("degrees of freedom must be positive");
  if (!(statistic >= 0.0)) throw DomainError("chi-squared statistic must be >= 0");
  return regularized_gamma_q(0.5 * dof, 0.5 * statistic);
}

nlohmann::json to_json(const ContingencyTable& table) {
  nlohmann::json rows = nlohmann::json::object();
  for (std::size_t row = 0; row < 2; ++row) {
    rows[std::string(ContingencyTable::kRowLabels[row])] = table.cells[row];
  }
  return nlohmann::json{
      {"attribute", table.attribute},
      {"mode", table.mode == TableMode::counts ? "counts" : "row_percentages"},
      {"columns", table.column_labels},
      {"rows", rows},
  };
}

nlohmann::json to_json(const ChiSquareResult& r, const ContingencyTable& table) {
  return nlohmann::json{
      {"attribute", r.attribute},
      {"statistic", r.statistic},
      {"dof", r.dof},
      {"p_value", r.p_value},
      {"yates_applied", r.yates_applied},
      {"significant", r.p_value < kSignificanceLevel},
      {"significance_level", kSignificanceLevel},
      {"dropped_columns", r.dropped_columns},
      {"table", to_json(table)},
  };
}

}  // namespace wumkit
