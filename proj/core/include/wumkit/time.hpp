#ifndef WUMKIT_TIME_HPP_
#define WUMKIT_TIME_HPP_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace wumkit {

/// All timestamps are UTC epoch seconds.
using Timestamp = std::chrono::sys_seconds;

struct TimeRange {
  Timestamp start;
  Timestamp end;  // inclusive

  bool contains(Timestamp t) const noexcept { return start <= t && t <= end; }
};

/// "2022-11-22 13:00:05". Used by the raw event export and manifests.
std::string format_iso(Timestamp t);

/// "22.11.2022 13:00", the session dataset's Log_Date_Time format. Seconds
/// are truncated.
std::string format_log_datetime(Timestamp t);

/// "22.11.2022 13:00:05", used by the pageview dataset.
std::string format_pageview_datetime(Timestamp t);

/// Accepts "YYYY-MM-DD HH:MM:SS", the same with a 'T' separator, or a bare
/// "YYYY-MM-DD" (midnight).
std::optional<Timestamp> parse_iso(std::string_view text);

/// Accepts "DD.MM.YYYY HH:MM" with optional ":SS".
std::optional<Timestamp> parse_log_datetime(std::string_view text);

}  // namespace wumkit

#endif  // WUMKIT_TIME_HPP_
