#include "wumkit/time.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace wumkit {
namespace {

using namespace std::chrono;

struct Civil {
  int year;
  unsigned month, day, hour, minute, second;
};

Civil to_civil(Timestamp t) {
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  return {int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()),
          unsigned(hms.hours().count()), unsigned(hms.minutes().count()),
          unsigned(hms.seconds().count())};
}

std::optional<Timestamp> from_civil(int y, int mo, int d, int h, int mi, int s) {
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 ||
      mi > 59 || s < 0 || s > 60) {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{unsigned(mo)}, day{unsigned(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

// Reads exactly `width` digits at `pos`.
bool read_fixed(std::string_view text, std::size_t pos, std::size_t width,
                int& out) {
  if (pos + width > text.size()) return false;
  const char* first = text.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + width, out);
  return ec == std::errc{} && ptr == first + width;
}

}  // namespace

std::string format_iso(Timestamp t) {
  const Civil c = to_civil(t);
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02u %02u:%02u:%02u",
                c.year, c.month, c.day, c.hour, c.minute, c.second);
  return buf.data();
}

std::string format_log_datetime(Timestamp t) {
  const Civil c = to_civil(t);
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%02u.%02u.%04d %02u:%02u", c.day,
                c.month, c.year, c.hour, c.minute);
  return buf.data();
}

std::string format_pageview_datetime(Timestamp t) {
  const Civil c = to_civil(t);
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%02u.%02u.%04d %02u:%02u:%02u", c.day,
                c.month, c.year, c.hour, c.minute, c.second);
  return buf.data();
}

std::optional<Timestamp> parse_iso(std::string_view text) {
  int y, mo, d, h = 0, mi = 0, s = 0;
  if (!read_fixed(text, 0, 4, y) || text.size() < 10 || text[4] != '-' ||
      !read_fixed(text, 5, 2, mo) || text[7] != '-' ||
      !read_fixed(text, 8, 2, d)) {
    return std::nullopt;
  }
  if (text.size() != 10) {
    if (text.size() != 19 || (text[10] != ' ' && text[10] != 'T') ||
        !read_fixed(text, 11, 2, h) || text[13] != ':' ||
        !read_fixed(text, 14, 2, mi) || text[16] != ':' ||
        !read_fixed(text, 17, 2, s)) {
      return std::nullopt;
    }
  }
  return from_civil(y, mo, d, h, mi, s);
}

std::optional<Timestamp> parse_log_datetime(std::string_view text) {
  int d, mo, y, h, mi, s = 0;
  if (text.size() != 16 && text.size() != 19) return std::nullopt;
  if (!read_fixed(text, 0, 2, d) || text[2] != '.' ||
      !read_fixed(text, 3, 2, mo) || text[5] != '.' ||
      !read_fixed(text, 6, 4, y) || text[10] != ' ' ||
      !read_fixed(text, 11, 2, h) || text[13] != ':' ||
      !read_fixed(text, 14, 2, mi)) {
    return std::nullopt;
  }
  if (text.size() == 19 && (text[16] != ':' || !read_fixed(text, 17, 2, s))) {
    return std::nullopt;
  }
  return from_civil(y, mo, d, h, mi, s);
}

}  // namespace wumkit
