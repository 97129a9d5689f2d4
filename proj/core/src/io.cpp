#include "wumkit/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "wumkit/error.hpp"

namespace wumkit {
namespace {

constexpr int kAverageDecimals = 2;
constexpr int kRatioDecimals = 4;
constexpr double kRatioTolerance = 0.5e-4 + 1e-12;

template <std::size_t N>
void check_header(const std::vector<std::string_view>& fields,
                  const std::array<std::string_view, N>& expected,
                  std::size_t line) {
  if (fields.size() < N) {
    throw ParseError(line, 0,
                     "header has " + std::to_string(fields.size()) +
                         " columns, expected at least " + std::to_string(N));
  }
  for (std::size_t i = 0; i < N; ++i) {
    if (fields[i] != expected[i]) {
      throw ParseError(line, i + 1,
                       "expected header column '" + std::string(expected[i]) +
                           "', found '" + std::string(fields[i]) + "'");
    }
  }
}

class FieldParser {
 public:
  FieldParser(const std::vector<std::string_view>& fields, std::size_t line)
      : fields_(fields), line_(line) {}

  template <typename T>
  T integer(std::size_t col, std::string_view name) const {
    const auto v = csv::parse_number<T>(fields_[col]);
    if (!v) fail(col, std::string(name) + " is not an integer: '" +
                          std::string(fields_[col]) + "'");
    return *v;
  }

  double real(std::size_t col, std::string_view name) const {
    const auto v = csv::parse_number<double>(fields_[col]);
    if (!v || !std::isfinite(*v)) {
      fail(col, std::string(name) + " is not a number: '" +
                    std::string(fields_[col]) + "'");
    }
    return *v;
  }

  template <typename T>
  T bounded(std::size_t col, std::string_view name, long lo, long hi) const {
    const auto v = integer<long>(col, name);
    if (v < lo || v > hi) fail(col, std::string(name) + " out of range");
    return static_cast<T>(v);
  }

  std::string_view text(std::size_t col) const { return fields_[col]; }

  [[noreturn]] void fail(std::size_t col, const std::string& what) const {
    throw ParseError(line_, col + 1, what);
  }

 private:
  const std::vector<std::string_view>& fields_;
  std::size_t line_;
};

void append(std::string& line, std::string_view field) {
  if (!line.empty()) line.push_back(',');
  line.append(field);
}

template <typename T>
void append_int(std::string& line, T value) {
  std::array<char, 24> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  append(line, std::string_view(buf.data(), std::size_t(ptr - buf.data())));
}

std::string visited_list(const std::vector<ServiceId>& ids) {
  std::string out = "\"";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(ids[i]);
  }
  out.push_back('"');
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

EventReader::EventReader(std::istream& in, const ServiceRegistry& registry)
    : reader_(in), registry_(registry) {
  if (!reader_.next(fields_)) throw ParseError(1, 0, "missing header");
  check_header(fields_, kEventColumns, reader_.line_number());
  if (fields_.size() != kEventColumns.size()) {
    throw ParseError(reader_.line_number(), kEventColumns.size() + 1,
                     "unexpected extra header column");
  }
}

std::optional<PageviewEvent> EventReader::next() {
  if (!reader_.next(fields_)) return std::nullopt;
  const std::size_t line = reader_.line_number();
  if (fields_.size() != kEventColumns.size()) {
    throw ParseError(line, 0,
                     "expected " + std::to_string(kEventColumns.size()) +
                         " fields, found " + std::to_string(fields_.size()));
  }
  const FieldParser f(fields_, line);
  PageviewEvent e;
  e.log_id = f.integer<LogId>(0, "log_id");
  e.session_id = f.integer<SessionId>(1, "session_id");
  const auto ts = parse_iso(f.text(2));
  if (!ts) f.fail(2, "timestamp is not 'YYYY-MM-DD HH:MM:SS'");
  e.timestamp = *ts;
  e.user_id = f.integer<UserId>(3, "user_id");
  e.service_id = f.integer<ServiceId>(4, "service_id");
  e.page_id = f.integer<std::uint32_t>(5, "page_id");
  e.page_duration = f.integer<std::int64_t>(6, "page_duration");
  e.page_load = f.real(7, "page_load");
  e.login_state = f.bounded<LoginState>(8, "login_state", 0, 1);
  e.is_logout_event = f.bounded<int>(9, "is_logout_event", 0, 1) != 0;
  e.logout_kind = f.bounded<LogoutKind>(10, "logout_kind", 0, 2);
  e.browser_type = f.bounded<BrowserType>(11, "browser_type", 0, 255);
  e.referer_type = f.bounded<std::uint8_t>(12, "referer_type", 0, 255);
  e.language_tr = f.bounded<std::uint8_t>(13, "language_tr", 0, 255);
  e.location = f.bounded<std::uint8_t>(14, "location", 0, 255);
  e.user_type = f.bounded<std::uint8_t>(15, "user_type", 0, 255);
  e.sex = f.bounded<std::uint8_t>(16, "sex", 0, 255);
  e.age = f.integer<std::int32_t>(17, "age");

  if (auto rejection = validate_event(e)) {
    const auto it = std::find(kEventColumns.begin(), kEventColumns.end(),
                              rejection->field);
    throw ParseError(line, std::size_t(it - kEventColumns.begin()) + 1,
                     rejection->message());
  }
  if (!registry_.contains(e.service_id)) {
    throw UnknownServiceError(std::to_string(e.service_id), line);
  }
  ++count_;
  return e;
}

std::vector<PageviewEvent> read_events(std::istream& in,
                                       const ServiceRegistry& registry) {
  EventReader reader(in, registry);
  std::vector<PageviewEvent> out;
  while (auto e = reader.next()) out.push_back(*e);
  return out;
}

EventWriter::EventWriter(std::ostream& out) : out_(out) {
  std::string header;
  for (auto c : kEventColumns) append(header, c);
  out_ << header << '\n';
}

void EventWriter::write(const PageviewEvent& e) {
  line_.clear();
  append_int(line_, e.log_id);
  append_int(line_, e.session_id);
  append(line_, format_iso(e.timestamp));
  append_int(line_, e.user_id);
  append_int(line_, e.service_id);
  append_int(line_, e.page_id);
  append_int(line_, e.page_duration);
  append(line_, csv::format_exact(e.page_load));
  append_int(line_, unsigned(e.login_state));
  append_int(line_, unsigned(e.is_logout_event));
  append_int(line_, unsigned(e.logout_kind));
  append_int(line_, unsigned(e.browser_type));
  append_int(line_, unsigned(e.referer_type));
  append_int(line_, unsigned(e.language_tr));
  append_int(line_, unsigned(e.location));
  append_int(line_, unsigned(e.user_type));
  append_int(line_, unsigned(e.sex));
  append_int(line_, e.age);
  line_.push_back('\n');
  out_.write(line_.data(), std::streamsize(line_.size()));
  if (!out_) throw IoError("event sink write failed");
  ++count_;
}

std::size_t write_events(std::span<const PageviewEvent> events, std::ostream& out) {
  EventWriter writer(out);
  for (const auto& e : events) writer.write(e);
  out.flush();
  if (!out) throw IoError("event sink write failed");
  return writer.count();
}

// ---------------------------------------------------------------------------

std::vector<std::string> enriched_session_header(const ServiceRegistry& registry) {
  std::vector<std::string> header(kSessionColumns.begin(), kSessionColumns.end());
  for (const auto& s : registry.entries()) {
    header.push_back("s_" + s.name);
    header.push_back("p_" + s.name);
    header.push_back("r_" + s.name);
  }
  return header;
}

EnrichedSessionWriter::EnrichedSessionWriter(std::ostream& out,
                                             const ServiceRegistry& registry)
    : out_(out), registry_(registry) {
  out_ << csv::join_row(enriched_session_header(registry)) << '\n';
  if (!out_) throw IoError("session sink write failed");
}

void EnrichedSessionWriter::write(const EnrichedSession& s) {
  const std::size_t n = registry_.size();
  if (s.visited.size() != n || s.pages.size() != n || s.ratios.size() != n) {
    throw DomainError("session " + std::to_string(s.session_id) +
                      " service vectors do not match the registry");
  }
  line_.clear();
  append_int(line_, s.log_id);
  append_int(line_, s.session_id);
  append(line_, format_log_datetime(s.log_date_time));
  append_int(line_, s.user_id);
  append_int(line_, unsigned(s.session_login_status));
  append_int(line_, s.logins_during_period);
  append_int(line_, unsigned(s.user_type));
  append_int(line_, unsigned(s.sex));
  append_int(line_, s.age);
  append_int(line_, unsigned(s.age_group));
  append_int(line_, unsigned(s.user_language_tr));
  append_int(line_, unsigned(s.user_location));
  append_int(line_, unsigned(s.browser_type));
  append_int(line_, unsigned(s.referer_type));
  append_int(line_, s.landing_srv_id);
  append_int(line_, s.exit_srv_id);
  append_int(line_, unsigned(s.exit_type));
  append_int(line_, s.total_session_duration);
  append(line_, csv::format_decimal(s.avg_page_duration, kAverageDecimals));
  append(line_, csv::format_decimal(s.total_page_load, kAverageDecimals));
  append(line_, csv::format_decimal(s.avg_page_load, kAverageDecimals));
  append_int(line_, s.page_count);
  append_int(line_, s.visitor_pageview);
  append_int(line_, s.user_pageview);
  append_int(line_, s.service_count);
  append(line_, csv::format_decimal(s.page_per_service, kAverageDecimals));
  append(line_, visited_list(s.visited_service_ids));
  for (std::size_t i = 0; i < n; ++i) {
    append_int(line_, unsigned(s.visited[i]));
    append_int(line_, s.pages[i]);
    append(line_, csv::format_decimal(s.ratios[i], kRatioDecimals));
  }
  line_.push_back('\n');
  out_.write(line_.data(), std::streamsize(line_.size()));
  if (!out_) throw IoError("session sink write failed");
  ++count_;
}

std::size_t write_enriched_sessions(std::span<const EnrichedSession> records,
                                    const ServiceRegistry& registry,
                                    std::ostream& out) {
  EnrichedSessionWriter writer(out, registry);
  for (const auto& s : records) writer.write(s);
  out.flush();
  if (!out) throw IoError("session sink write failed");
  return writer.count();
}

EnrichedSessionReader::EnrichedSessionReader(std::istream& in,
                                             const ServiceRegistry& registry)
    : reader_(in), registry_(registry) {
  if (!reader_.next(fields_)) throw ParseError(1, 0, "missing header");
  const auto expected = enriched_session_header(registry);
  if (fields_.size() != expected.size()) {
    throw ParseError(reader_.line_number(), 0,
                     "header has " + std::to_string(fields_.size()) +
                         " columns, registry implies " +
                         std::to_string(expected.size()));
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (fields_[i] != expected[i]) {
      throw ParseError(reader_.line_number(), i + 1,
                       "expected header column '" + expected[i] + "', found '" +
                           std::string(fields_[i]) + "'");
    }
  }
}

std::optional<EnrichedSession> EnrichedSessionReader::next() {
  if (!reader_.next(fields_)) return std::nullopt;
  const std::size_t line = reader_.line_number();
  const std::size_t n = registry_.size();
  const std::size_t width = kSessionColumns.size() + 3 * n;
  if (fields_.size() != width) {
    throw ParseError(line, 0,
                     "expected " + std::to_string(width) + " fields, found " +
                         std::to_string(fields_.size()));
  }
  const FieldParser f(fields_, line);
  EnrichedSession s;
  s.log_id = f.integer<LogId>(0, "Log_ID");
  s.session_id = f.integer<SessionId>(1, "Session_ID");
  const auto ts = parse_log_datetime(f.text(2));
  if (!ts) f.fail(2, "Log_Date_Time is not 'DD.MM.YYYY HH:MM'");
  s.log_date_time = *ts;
  s.user_id = f.integer<UserId>(3, "User_ID");
  s.session_login_status = f.bounded<std::uint8_t>(4, "Session_Login_Status", 0, 1);
  s.logins_during_period = f.integer<std::uint32_t>(5, "Logins_During_Period");
  s.user_type = f.bounded<std::uint8_t>(6, "User_Type", 0, 255);
  s.sex = f.bounded<std::uint8_t>(7, "Sex", 0, 255);
  s.age = f.integer<std::int32_t>(8, "Age");
  s.age_group = f.bounded<std::uint8_t>(9, "Age_Group", 0, 255);
  s.user_language_tr = f.bounded<std::uint8_t>(10, "User_Language_TR", 0, 255);
  s.user_location = f.bounded<std::uint8_t>(11, "User_Location", 0, 255);
  s.browser_type = f.bounded<std::uint8_t>(12, "Browser_Type", 0, 255);
  s.referer_type = f.bounded<std::uint8_t>(13, "Referer_Type", 0, 255);
  s.landing_srv_id = f.integer<ServiceId>(14, "Landing_Srv_ID");
  s.exit_srv_id = f.integer<ServiceId>(15, "Exit_Srv_ID");
  s.exit_type = f.bounded<ExitMethod>(16, "Exit_Type", 0, 2);
  s.total_session_duration = f.integer<std::int64_t>(17, "Total_Session_Duration");
  s.avg_page_duration = f.real(18, "Avg_Page_Duration");
  s.total_page_load = f.real(19, "Total_Page_Load");
  s.avg_page_load = f.real(20, "Avg_Page_Load");
  s.page_count = f.integer<std::uint32_t>(21, "Page_Count");
  s.visitor_pageview = f.integer<std::uint32_t>(22, "Visitor_PageView");
  s.user_pageview = f.integer<std::uint32_t>(23, "User_PageView");
  s.service_count = f.integer<std::uint32_t>(24, "Service_Count");
  s.page_per_service = f.real(25, "Page_per_Service");

  std::string_view ids = f.text(26);
  while (!ids.empty()) {
    const auto comma = ids.find(',');
    const auto token = ids.substr(0, comma);
    const auto id = csv::parse_number<ServiceId>(token);
    if (!id) f.fail(26, "Visited_Service_IDs has a non-integer entry");
    s.visited_service_ids.push_back(*id);
    ids = comma == std::string_view::npos ? std::string_view{} : ids.substr(comma + 1);
  }

  s.visited.resize(n);
  s.pages.resize(n);
  s.ratios.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t base = kSessionColumns.size() + 3 * i;
    const auto& name = registry_.name_at(i);
    s.visited[i] = f.bounded<std::uint8_t>(base, "s_" + name, 0, 1);
    s.pages[i] = f.integer<std::uint32_t>(base + 1, "p_" + name);
    const double stored = f.real(base + 2, "r_" + name);
    s.ratios[i] = s.page_count ? double(s.pages[i]) / double(s.page_count) : 0.0;
    if (std::fabs(stored - s.ratios[i]) > kRatioTolerance) {
      f.fail(base + 2, "r_" + name + " disagrees with p_" + name + "/Page_Count");
    }
  }
  ++count_;
  return s;
}

std::vector<EnrichedSession> read_enriched_sessions(std::istream& in,
                                                    const ServiceRegistry& registry) {
  EnrichedSessionReader reader(in, registry);
  std::vector<EnrichedSession> out;
  while (auto s = reader.next()) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------------------

EnrichedPageviewWriter::EnrichedPageviewWriter(std::ostream& out) : out_(out) {
  std::string header;
  for (auto c : kPageviewColumns) append(header, c);
  out_ << header << '\n';
}

void EnrichedPageviewWriter::write(const EnrichedPageview& p) {
  line_.clear();
  append_int(line_, p.log_id);
  append_int(line_, p.session_id);
  append(line_, format_pageview_datetime(p.timestamp));
  append_int(line_, p.service_id);
  append_int(line_, p.page_id);
  append_int(line_, p.page_duration);
  append(line_, csv::format_exact(p.page_load));
  append_int(line_, unsigned(p.login_state));
  append_int(line_, unsigned(p.is_logout_event));
  append_int(line_, p.user_id);
  append_int(line_, unsigned(p.user_type));
  append_int(line_, unsigned(p.sex));
  append_int(line_, unsigned(p.age_group));
  append_int(line_, unsigned(p.browser_type));
  append_int(line_, unsigned(p.user_location));
  line_.push_back('\n');
  out_.write(line_.data(), std::streamsize(line_.size()));
  if (!out_) throw IoError("pageview sink write failed");
  ++count_;
}

std::size_t write_enriched_pageviews(std::span<const EnrichedPageview> records,
                                     std::ostream& out) {
  EnrichedPageviewWriter writer(out);
  for (const auto& p : records) writer.write(p);
  out.flush();
  if (!out) throw IoError("pageview sink write failed");
  return writer.count();
}

std::vector<EnrichedPageview> read_enriched_pageviews(std::istream& in) {
  csv::Reader reader(in);
  std::vector<std::string_view> fields;
  if (!reader.next(fields)) throw ParseError(1, 0, "missing header");
  check_header(fields, kPageviewColumns, reader.line_number());
  std::vector<EnrichedPageview> out;
  while (reader.next(fields)) {
    const std::size_t line = reader.line_number();
    if (fields.size() != kPageviewColumns.size()) {
      throw ParseError(line, 0, "wrong field count");
    }
    const FieldParser f(fields, line);
    EnrichedPageview p;
    p.log_id = f.integer<LogId>(0, "Log_ID");
    p.session_id = f.integer<SessionId>(1, "Session_ID");
    const auto ts = parse_log_datetime(f.text(2));
    if (!ts) f.fail(2, "Pageview_Date_Time is not 'DD.MM.YYYY HH:MM:SS'");
    p.timestamp = *ts;
    p.service_id = f.integer<ServiceId>(3, "Service_ID");
    p.page_id = f.integer<std::uint32_t>(4, "Page_ID");
    p.page_duration = f.integer<std::int64_t>(5, "Page_Duration");
    p.page_load = f.real(6, "Page_Load");
    p.login_state = f.bounded<LoginState>(7, "Login_Status", 0, 1);
    p.is_logout_event = f.bounded<int>(8, "Is_Logout", 0, 1) != 0;
    p.user_id = f.integer<UserId>(9, "User_ID");
    p.user_type = f.bounded<std::uint8_t>(10, "User_Type", 0, 255);
    p.sex = f.bounded<std::uint8_t>(11, "Sex", 0, 255);
    p.age_group = f.bounded<std::uint8_t>(12, "Age_Group", 0, 255);
    p.browser_type = f.bounded<std::uint8_t>(13, "Browser_Type", 0, 255);
    p.user_location = f.bounded<std::uint8_t>(14, "User_Location", 0, 255);
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(TimeFrame frame) noexcept {
  switch (frame) {
    case TimeFrame::week:
      return "week";
    case TimeFrame::month:
      return "month";
    case TimeFrame::custom:
      return "custom";
  }
  return "custom";
}

TimeFrame classify_time_frame(const TimeRange& range) {
  using namespace std::chrono;
  const auto span = range.end - range.start + seconds{1};
  const auto start_day = floor<days>(range.start);
  if (range.start != start_day) return TimeFrame::custom;
  if (span == days{7}) return TimeFrame::week;
  const year_month_day ymd{start_day};
  if (ymd.day() == day{1}) {
    const sys_days next_month{ymd.year() / ymd.month() / day{1} + months{1}};
    if (range.end + seconds{1} == next_month) return TimeFrame::month;
  }
  return TimeFrame::custom;
}

nlohmann::json to_json(const DatasetManifest& m) {
  return nlohmann::json{
      {"file_name", m.file_name},
      {"time_frame", to_string(m.time_frame)},
      {"time_range",
       {{"start", format_iso(m.time_range.start)},
        {"end", format_iso(m.time_range.end)}}},
      {"record_count", m.record_count},
      {"file_size_bytes", m.file_size_bytes},
  };
}

DatasetManifest manifest_from_json(const nlohmann::json& j) {
  DatasetManifest m;
  m.file_name = j.at("file_name").get<std::string>();
  const auto frame = j.at("time_frame").get<std::string>();
  if (frame == "week") {
    m.time_frame = TimeFrame::week;
  } else if (frame == "month") {
    m.time_frame = TimeFrame::month;
  } else if (frame == "custom") {
    m.time_frame = TimeFrame::custom;
  } else {
    throw ConfigError("unknown time_frame '" + frame + "'");
  }
  const auto start = parse_iso(j.at("time_range").at("start").get<std::string>());
  const auto end = parse_iso(j.at("time_range").at("end").get<std::string>());
  if (!start || !end) throw ConfigError("manifest time_range is malformed");
  m.time_range = {*start, *end};
  m.record_count = j.at("record_count").get<std::uint64_t>();
  m.file_size_bytes = j.at("file_size_bytes").get<std::uint64_t>();
  return m;
}

DatasetManifest describe_file(const std::filesystem::path& path,
                              const TimeRange& range) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::uint64_t lines = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line != "\r") ++lines;
  }
  DatasetManifest m;
  m.file_name = path.filename().string();
  m.time_frame = classify_time_frame(range);
  m.time_range = range;
  m.record_count = lines > 0 ? lines - 1 : 0;
  m.file_size_bytes = std::filesystem::file_size(path);
  return m;
}

namespace {

template <typename Record, typename TimeOf>
Slice<Record> slice_impl(std::span<const Record> records, const TimeRange& range,
                         std::string file_name, TimeOf time_of) {
  if (range.start > range.end) {
    throw DomainError("time range start " + format_iso(range.start) +
                      " is after end " + format_iso(range.end));
  }
  Slice<Record> out;
  for (const auto& r : records) {
    if (range.contains(time_of(r))) out.records.push_back(r);
  }
  out.manifest.file_name = std::move(file_name);
  out.manifest.time_frame = classify_time_frame(range);
  out.manifest.time_range = range;
  out.manifest.record_count = out.records.size();
  return out;
}

}  // namespace

Slice<EnrichedSession> slice_by_time(std::span<const EnrichedSession> records,
                                     const TimeRange& range, std::string file_name) {
  return slice_impl(records, range, std::move(file_name),
                    [](const EnrichedSession& s) { return s.log_date_time; });
}

Slice<EnrichedPageview> slice_by_time(std::span<const EnrichedPageview> records,
                                      const TimeRange& range, std::string file_name) {
  return slice_impl(records, range, std::move(file_name),
                    [](const EnrichedPageview& p) { return p.timestamp; });
}

std::string session_dataset_name(std::string_view tag) {
  return "va_sess" + std::string(tag) + ".csv";
}

std::string pageview_dataset_name(std::string_view tag) {
  return "va_page" + std::string(tag) + ".csv";
}

}  // namespace wumkit
