#ifndef WUMKIT_IO_HPP_
#define WUMKIT_IO_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wumkit/csv.hpp"
#include "wumkit/model.hpp"

namespace wumkit {

// ---------------------------------------------------------------------------
// Raw event export (events.csv)
//
// Comma separated, dot decimal, UTF-8, mandatory header. Enumerations are
// written as their integer codes; timestamps as "YYYY-MM-DD HH:MM:SS" UTC.

inline constexpr std::array<std::string_view, 18> kEventColumns = {
    "log_id",      "session_id",      "timestamp",   "user_id",
    "service_id",  "page_id",         "page_duration", "page_load",
    "login_state", "is_logout_event", "logout_kind", "browser_type",
    "referer_type", "language_tr",    "location",    "user_type",
    "sex",         "age"};

/// Streams validated events from a collector export in file order.
class EventReader {
 public:
  /// Reads and checks the header. Throws ParseError on a missing or
  /// mismatched header.
  EventReader(std::istream& in, const ServiceRegistry& registry);

  /// Next event, or nullopt at end of input. Throws ParseError (with line
  /// and column) for malformed or invalid rows and UnknownServiceError for
  /// service ids absent from the registry.
  std::optional<PageviewEvent> next();

  /// Events returned so far.
  std::size_t count() const noexcept { return count_; }

 private:
  csv::Reader reader_;
  const ServiceRegistry& registry_;
  std::vector<std::string_view> fields_;
  std::size_t count_ = 0;
};

std::vector<PageviewEvent> read_events(std::istream& in,
                                       const ServiceRegistry& registry);

class EventWriter {
 public:
  explicit EventWriter(std::ostream& out);
  void write(const PageviewEvent& e);
  std::size_t count() const noexcept { return count_; }

 private:
  std::ostream& out_;
  std::string line_;
  std::size_t count_ = 0;
};

std::size_t write_events(std::span<const PageviewEvent> events, std::ostream& out);

// ---------------------------------------------------------------------------
// Enriched session dataset (va_sess*.csv)

/// The fixed leading columns, in dataset order.
inline constexpr std::array<std::string_view, 27> kSessionColumns = {
    "Log_ID",           "Session_ID",         "Log_Date_Time",
    "User_ID",          "Session_Login_Status", "Logins_During_Period",
    "User_Type",        "Sex",                "Age",
    "Age_Group",        "User_Language_TR",   "User_Location",
    "Browser_Type",     "Referer_Type",       "Landing_Srv_ID",
    "Exit_Srv_ID",      "Exit_Type",          "Total_Session_Duration",
    "Avg_Page_Duration", "Total_Page_Load",   "Avg_Page_Load",
    "Page_Count",       "Visitor_PageView",   "User_PageView",
    "Service_Count",    "Page_per_Service",   "Visited_Service_IDs"};

/// Fixed columns followed by s_<name>, p_<name>, r_<name> for each service in
/// registry order.
std::vector<std::string> enriched_session_header(const ServiceRegistry& registry);

class EnrichedSessionWriter {
 public:
  EnrichedSessionWriter(std::ostream& out, const ServiceRegistry& registry);
  void write(const EnrichedSession& s);
  std::size_t count() const noexcept { return count_; }

 private:
  std::ostream& out_;
  const ServiceRegistry& registry_;
  std::string line_;
  std::size_t count_ = 0;
};

std::size_t write_enriched_sessions(std::span<const EnrichedSession> records,
                                    const ServiceRegistry& registry,
                                    std::ostream& out);

/// Parses a session dataset written against `registry`. r_ values are
/// recomputed from p_ and Page_Count; a stored ratio that disagrees beyond its
/// printed precision is a ParseError.
class EnrichedSessionReader {
 public:
  EnrichedSessionReader(std::istream& in, const ServiceRegistry& registry);
  std::optional<EnrichedSession> next();
  std::size_t count() const noexcept { return count_; }

 private:
  csv::Reader reader_;
  const ServiceRegistry& registry_;
  std::vector<std::string_view> fields_;
  std::size_t count_ = 0;
};

std::vector<EnrichedSession> read_enriched_sessions(std::istream& in,
                                                    const ServiceRegistry& registry);

// ---------------------------------------------------------------------------
// Enriched pageview dataset (va_page*.csv)

inline constexpr std::array<std::string_view, 15> kPageviewColumns = {
    "Log_ID",       "Session_ID", "Pageview_Date_Time", "Service_ID",
    "Page_ID",      "Page_Duration", "Page_Load",       "Login_Status",
    "Is_Logout",    "User_ID",    "User_Type",          "Sex",
    "Age_Group",    "Browser_Type", "User_Location"};

class EnrichedPageviewWriter {
 public:
  explicit EnrichedPageviewWriter(std::ostream& out);
  void write(const EnrichedPageview& p);
  std::size_t count() const noexcept { return count_; }

 private:
  std::ostream& out_;
  std::string line_;
  std::size_t count_ = 0;
};

std::size_t write_enriched_pageviews(std::span<const EnrichedPageview> records,
                                     std::ostream& out);

std::vector<EnrichedPageview> read_enriched_pageviews(std::istream& in);

// ---------------------------------------------------------------------------
// Time-frame datasets

enum class TimeFrame { week, month, custom };

std::string_view to_string(TimeFrame frame) noexcept;

/// A 7-day inclusive range is a week; a range covering exactly one calendar
/// month is a month; anything else is custom.
TimeFrame classify_time_frame(const TimeRange& range);

struct DatasetManifest {
  std::string file_name;
  TimeFrame time_frame = TimeFrame::custom;
  TimeRange time_range{};
  std::uint64_t record_count = 0;
  std::uint64_t file_size_bytes = 0;
};

nlohmann::json to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const nlohmann::json& j);

/// Fills record_count (lines minus header) and file_size_bytes from a
/// written dataset file.
DatasetManifest describe_file(const std::filesystem::path& path,
                              const TimeRange& range);

template <typename Record>
struct Slice {
  std::vector<Record> records;
  DatasetManifest manifest;
};

/// Keeps sessions whose Log_Date_Time lies in the inclusive range. Throws
/// DomainError when start > end.
Slice<EnrichedSession> slice_by_time(std::span<const EnrichedSession> records,
                                     const TimeRange& range,
                                     std::string file_name = {});

/// Keeps pageviews whose own timestamp lies in the inclusive range.
Slice<EnrichedPageview> slice_by_time(std::span<const EnrichedPageview> records,
                                      const TimeRange& range,
                                      std::string file_name = {});

/// "va_sess5.csv" style names; an empty tag gives "va_sess.csv".
std::string session_dataset_name(std::string_view tag);
std::string pageview_dataset_name(std::string_view tag);

}  // namespace wumkit

#endif  // WUMKIT_IO_HPP_
