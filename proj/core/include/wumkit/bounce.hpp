#ifndef WUMKIT_BOUNCE_HPP_
#define WUMKIT_BOUNCE_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wumkit/model.hpp"

namespace wumkit {

/// p-values below this are reported as significant.
inline constexpr double kSignificanceLevel = 0.05;

/// Single-page (bounce) versus multi-page segmentation. Shares are
/// percentages kept at full precision; to_json rounds them to 2 decimals.
struct BounceStats {
  std::uint64_t total_sessions = 0;
  std::uint64_t single_page_sessions = 0;
  std::uint64_t multi_page_sessions = 0;
  std::uint64_t single_page_pageviews = 0;
  std::uint64_t multi_page_pageviews = 0;
  double session_share_single = 0.0;
  double session_share_multi = 0.0;
  double pageview_share_single = 0.0;
  double pageview_share_multi = 0.0;

  /// Derives totals and shares from the four counts.
  static BounceStats from_counts(std::uint64_t single_sessions,
                                 std::uint64_t multi_sessions,
                                 std::uint64_t single_pageviews,
                                 std::uint64_t multi_pageviews);
};

class BounceCounter {
 public:
  void add(std::uint32_t page_count);
  void add(const EnrichedSession& s) { add(s.page_count); }
  BounceStats result() const;

 private:
  std::uint64_t single_ = 0;
  std::uint64_t multi_ = 0;
  std::uint64_t multi_pageviews_ = 0;
};

BounceStats bounce_summary(std::span<const EnrichedSession> sessions);

/// Half-away-from-zero rounding to `decimals` places, for reporting.
double round_to(double value, int decimals);

nlohmann::json to_json(const BounceStats& stats);

/// Categorical session columns that can be cross-tabulated against the
/// bounce class. Names match the session dataset header.
enum class SessionAttribute {
  browser_type,
  referer_type,
  user_language_tr,
  user_location,
  user_type,
  sex,
  age_group,
  session_login_status,
  exit_type,
  landing_srv_id,
  exit_srv_id,
};

/// The four client attributes of the bounce analysis.
inline constexpr std::array<SessionAttribute, 4> kClientAttributes = {
    SessionAttribute::browser_type, SessionAttribute::referer_type,
    SessionAttribute::user_language_tr, SessionAttribute::user_location};

std::string_view to_string(SessionAttribute a) noexcept;
/// Throws UnknownAttributeError.
SessionAttribute parse_attribute(std::string_view name);
std::int64_t attribute_value(const EnrichedSession& s, SessionAttribute a);

enum class TableMode { counts, row_percentages };

/// Bounce class (row 0 single, row 1 multi) by attribute category.
struct ContingencyTable {
  static constexpr std::array<std::string_view, 2> kRowLabels = {"single",
                                                                  "multi"};

  std::string attribute;
  std::vector<std::string> column_labels;
  std::array<std::vector<double>, 2> cells;
  TableMode mode = TableMode::counts;

  std::size_t columns() const noexcept { return column_labels.size(); }
};

/// Rescales each row to sum to 100.
ContingencyTable to_row_percentages(const ContingencyTable& table);

/// Incremental cross-tabulation over a session stream.
class ContingencyCounter {
 public:
  explicit ContingencyCounter(SessionAttribute attribute) : attribute_(attribute) {}
  void add(const EnrichedSession& s);
  void merge(const ContingencyCounter& other);
  ContingencyTable table(TableMode mode) const;
  SessionAttribute attribute() const noexcept { return attribute_; }

 private:
  SessionAttribute attribute_;
  std::map<std::int64_t, std::array<std::uint64_t, 2>> counts_;
};

/// Throws UnknownAttributeError for names that are not categorical columns.
ContingencyTable contingency_table(std::span<const EnrichedSession> sessions,
                                   std::string_view attribute, TableMode mode);

enum class YatesPolicy { automatic, on, off };

/// Throws ConfigError on anything other than auto/on/off.
YatesPolicy parse_yates_policy(std::string_view text);
std::string_view to_string(YatesPolicy p) noexcept;

struct ChiSquareResult {
  std::string attribute;
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool yates_applied = false;
  /// Labels of the columns that took part, after all-zero columns were
  /// dropped, and the 2 x c contributions (O-E)^2/E for those columns.
  std::vector<std::string> columns;
  std::array<std::vector<double>, 2> contributions;
  std::vector<std::string> dropped_columns;
};

/// Pearson chi-squared test of independence on a 2 x c table. All-zero
/// columns are dropped first. With YatesPolicy::automatic the continuity
/// correction is applied exactly when dof = 1. Throws DegenerateTableError
/// when fewer than two usable columns remain or a row total is zero.
ChiSquareResult chi_square(const ContingencyTable& table,
                           YatesPolicy yates = YatesPolicy::automatic);

/// Survival function of the chi-squared distribution, Q(dof/2, statistic/2).
double chi_square_p_value(double statistic, int dof);

nlohmann::json to_json(const ContingencyTable& table);
nlohmann::json to_json(const ChiSquareResult& result, const ContingencyTable& table);

}  // namespace wumkit

#endif  // WUMKIT_BOUNCE_HPP_
