#include "wumkit/csv.hpp"

#include <array>
#include <cmath>

#include "wumkit/error.hpp"

namespace wumkit::csv {

bool Reader::next(std::vector<std::string_view>& fields) {
  fields.clear();
  unescaped_.clear();
  while (std::getline(in_, line_)) {
    ++line_number_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    if (!line_.empty()) break;
  }
  if (line_.empty()) return false;

  const std::string_view line = line_;
  std::size_t pos = 0;
  while (true) {
    if (pos < line.size() && line[pos] == '"') {
      std::size_t i = pos + 1;
      bool escaped_quotes = false;
      while (true) {
        const auto q = line.find('"', i);
        if (q == std::string_view::npos) {
          throw ParseError(line_number_, fields.size() + 1,
                           "unterminated quoted field");
        }
        if (q + 1 < line.size() && line[q + 1] == '"') {
          escaped_quotes = true;
          i = q + 2;
          continue;
        }
        std::string_view raw = line.substr(pos + 1, q - pos - 1);
        if (escaped_quotes) {
          std::string decoded;
          decoded.reserve(raw.size());
          for (std::size_t k = 0; k < raw.size(); ++k) {
            decoded.push_back(raw[k]);
            if (raw[k] == '"') ++k;
          }
          unescaped_.push_back(std::move(decoded));
          raw = unescaped_.back();
        }
        fields.push_back(raw);
        pos = q + 1;
        break;
      }
      if (pos < line.size() && line[pos] != ',') {
        throw ParseError(line_number_, fields.size(),
                         "unexpected text after closing quote");
      }
    } else {
      const auto comma = line.find(',', pos);
      fields.push_back(line.substr(pos, comma == std::string_view::npos
                                            ? std::string_view::npos
                                            : comma - pos));
      pos = comma == std::string_view::npos ? line.size() : comma;
    }
    if (pos >= line.size()) break;
    ++pos;  // skip comma
    if (pos == line.size()) {
      fields.emplace_back();
      break;
    }
  }
  return true;
}

std::string format_decimal(double value, int decimals) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed, decimals);
  if (ec != std::errc{}) return "nan";
  std::string text(buf.data(), ptr);
  if (text.find('.') != std::string::npos) {
    while (text.back() == '0') text.pop_back();
    if (text.back() == '.') text.pop_back();
  }
  if (text == "-0") text = "0";
  return text;
}

std::string format_exact(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return ec == std::errc{} ? std::string(buf.data(), ptr) : "nan";
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    out.push_back(c);
    if (c == '"') out.push_back('"');
  }
  out.push_back('"');
  return out;
}

std::string join_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(fields[i]);
  }
  return out;
}

}  // namespace wumkit::csv
