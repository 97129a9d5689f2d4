#ifndef WUMKIT_CSV_HPP_
#define WUMKIT_CSV_HPP_

#include <charconv>
#include <cstddef>
#include <deque>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

namespace wumkit::csv {

/// Line-oriented reader for comma-separated text with RFC 4180 style
/// double-quoted fields. Quoted fields may not span lines. Field views stay
/// valid until the next call to next().
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads the next non-empty line. Returns false at end of input. Throws
  /// ParseError on an unterminated quote.
  bool next(std::vector<std::string_view>& fields);

  /// 1-based number of the line most recently returned.
  std::size_t line_number() const noexcept { return line_number_; }

 private:
  std::istream& in_;
  std::string line_;
  std::deque<std::string> unescaped_;
  std::size_t line_number_ = 0;
};

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars rejects a leading '+', which some exporters emit.
    if (first != last && *first == '+') ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) return std::nullopt;
  return value;
}

/// Fixed-point rendering with at most `decimals` places and trailing zeros
/// dropped: 48.666.. -> "48.67", 7.5 -> "7.5", 1.0 -> "1".
std::string format_decimal(double value, int decimals);

/// Shortest text that parses back to exactly `value`.
std::string format_exact(double value);

/// Quotes a field when it contains a comma, quote, or line break.
std::string escape(std::string_view field);

/// Joins already-rendered fields with commas, escaping each one.
std::string join_row(const std::vector<std::string>& fields);

}  // namespace wumkit::csv

#endif  // WUMKIT_CSV_HPP_
