#include "wumkit/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "wumkit/error.hpp"

namespace wumkit {
namespace {

constexpr std::size_t kDenseIdLimit = 1u << 16;

bool valid_service_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

ServiceRegistry::ServiceRegistry(std::vector<Service> entries)
    : entries_(std::move(entries)) {
  std::unordered_set<ServiceId> ids;
  std::unordered_set<std::string> names;
  ServiceId max_id = 0;
  for (const auto& s : entries_) {
    if (s.id == 0) throw ConfigError("service id must be positive");
    if (!valid_service_name(s.name)) {
      throw ConfigError("service name '" + s.name +
                        "' must be non-empty lowercase [a-z0-9_]");
    }
    if (!ids.insert(s.id).second) {
      throw ConfigError("duplicate service id " + std::to_string(s.id));
    }
    if (!names.insert(s.name).second) {
      throw ConfigError("duplicate service name '" + s.name + "'");
    }
    max_id = std::max(max_id, s.id);
  }
  if (max_id >= kDenseIdLimit) {
    throw ConfigError("service ids must be below " +
                      std::to_string(kDenseIdLimit));
  }
  dense_.assign(std::size_t{max_id} + 1, -1);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    dense_[entries_[i].id] = static_cast<std::int32_t>(i);
  }
}

const ServiceRegistry& ServiceRegistry::standard() {
  static const ServiceRegistry registry({{1, "gate"},
                                         {2, "mail"},
                                         {3, "obis"},
                                         {4, "pbis"},
                                         {5, "abis"},
                                         {6, "cawis"},
                                         {7, "form"},
                                         {8, "menu"},
                                         {9, "pbook"},
                                         {10, "quest"}});
  return registry;
}

ServiceRegistry ServiceRegistry::parse(std::string_view text) {
  std::vector<Service> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError(line_no, 0, "expected 'id,name'");
    }
    const auto id_text = trim(line.substr(0, comma));
    const auto name = trim(line.substr(comma + 1));
    ServiceId id = 0;
    const auto [ptr, ec] =
        std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    if (ec != std::errc{} || ptr != id_text.data() + id_text.size()) {
      if (entries.empty() && line_no == 1) continue;  // header
      throw ParseError(line_no, 1, "service id is not a positive integer");
    }
    entries.push_back({id, std::string(name)});
  }
  return ServiceRegistry(std::move(entries));
}

std::optional<std::size_t> ServiceRegistry::index_of(ServiceId id) const noexcept {
  if (id >= dense_.size() || dense_[id] < 0) return std::nullopt;
  return static_cast<std::size_t>(dense_[id]);
}

std::optional<std::size_t> ServiceRegistry::index_of(
    std::string_view name) const noexcept {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t ServiceRegistry::position(ServiceId id) const {
  if (auto idx = index_of(id)) return *idx;
  throw UnknownServiceError(std::to_string(id));
}

const std::string& ServiceRegistry::name_of(ServiceId id) const {
  return entries_[position(id)].name;
}

ServiceId resolve_service(std::string_view name_or_id,
                          const ServiceRegistry& registry) {
  if (registry.empty()) throw ConfigError("service registry is empty");
  if (auto idx = registry.index_of(name_or_id)) return registry.id_at(*idx);
  ServiceId id = 0;
  const char* end = name_or_id.data() + name_or_id.size();
  const auto [ptr, ec] = std::from_chars(name_or_id.data(), end, id);
  if (ec == std::errc{} && ptr == end && registry.contains(id)) return id;
  throw UnknownServiceError(std::string(name_or_id));
}

ServiceId resolve_service(ServiceId id, const ServiceRegistry& registry) {
  if (registry.empty()) throw ConfigError("service registry is empty");
  if (!registry.contains(id)) throw UnknownServiceError(std::to_string(id));
  return id;
}

std::string_view to_string(ExitMethod m) noexcept {
  switch (m) {
    case ExitMethod::direct:
      return "direct";
    case ExitMethod::secure_button:
      return "secure_button";
    case ExitMethod::warning_window:
      return "warning_window";
  }
  return "unknown";
}

std::optional<EventRejection> validate_event(const PageviewEvent& e) {
  const auto reject = [](std::string field, std::string reason) {
    return std::optional<EventRejection>{
        EventRejection{std::move(field), std::move(reason)}};
  };
  if (e.log_id == 0) return reject("log_id", "must be positive");
  if (e.session_id == 0) return reject("session_id", "must be positive");
  if (e.page_id == 0) return reject("page_id", "must be positive");
  if (e.page_duration < 0) return reject("page_duration", "must be non-negative");
  if (!std::isfinite(e.page_load) || e.page_load < 0.0) {
    return reject("page_load", "must be a non-negative number");
  }
  if (static_cast<unsigned>(e.login_state) > 1) {
    return reject("login_state", "out of range");
  }
  if (static_cast<unsigned>(e.logout_kind) > 2) {
    return reject("logout_kind", "out of range");
  }
  if ((e.logout_kind != LogoutKind::none) != e.is_logout_event) {
    return reject("logout_kind", "inconsistent with is_logout_event");
  }
  if (e.is_logout_event && e.login_state != LoginState::authenticated) {
    return reject("is_logout_event", "requires an authenticated pageview");
  }
  if (e.login_state == LoginState::authenticated && e.user_id == 0) {
    return reject("user_id", "must be set on authenticated pageviews");
  }
  const auto browser = static_cast<unsigned>(e.browser_type);
  if (browser < 1 || browser > 3) return reject("browser_type", "out of range");
  if (e.referer_type < 1 || e.referer_type > 6) {
    return reject("referer_type", "out of range");
  }
  if (e.language_tr > 1) return reject("language_tr", "out of range");
  if (e.location > 2) return reject("location", "out of range");
  if (e.user_type < 1) return reject("user_type", "must be positive");
  if (e.sex > 2) return reject("sex", "out of range");
  if (e.age < 0) return reject("age", "must be non-negative");
  return std::nullopt;
}

std::vector<std::string> check_invariants(const EnrichedSession& s,
                                          const ServiceRegistry& registry,
                                          const InvariantOptions& options) {
  std::vector<std::string> out;
  const auto fail = [&out](std::string msg) { out.push_back(std::move(msg)); };
  const auto near = [](double a, double b, double tol) {
    return std::fabs(a - b) <= tol;
  };

  if (s.page_count == 0) fail("Page_Count must be positive");
  if (s.page_count != s.visitor_pageview + s.user_pageview) {
    fail("Page_Count != Visitor_PageView + User_PageView");
  }

  const std::size_t n = registry.size();
  if (s.visited.size() != n || s.pages.size() != n || s.ratios.size() != n) {
    fail("service vectors do not match registry size");
    return out;
  }

  const auto visited_sum = std::accumulate(s.visited.begin(), s.visited.end(), 0u);
  if (s.service_count != s.visited_service_ids.size()) {
    fail("Service_Count != |Visited_Service_IDs|");
  }
  if (s.service_count != visited_sum) fail("Service_Count != sum of s_*");
  for (std::size_t i = 0; i < n; ++i) {
    if (s.visited[i] > 1) fail("s_" + registry.name_at(i) + " is not 0/1");
    if ((s.visited[i] == 1) != (s.pages[i] > 0)) {
      fail("s_" + registry.name_at(i) + " disagrees with p_" +
           registry.name_at(i));
    }
  }
  std::unordered_set<ServiceId> listed;
  for (ServiceId id : s.visited_service_ids) {
    const auto idx = registry.index_of(id);
    if (!idx) {
      fail("Visited_Service_IDs contains unknown service " + std::to_string(id));
    } else if (!s.visited[*idx]) {
      fail("Visited_Service_IDs lists " + registry.name_at(*idx) +
           " but s_ is 0");
    }
    if (!listed.insert(id).second) {
      fail("Visited_Service_IDs repeats " + std::to_string(id));
    }
  }

  const std::uint64_t page_sum =
      std::accumulate(s.pages.begin(), s.pages.end(), std::uint64_t{0});
  if (page_sum != s.page_count) fail("sum of p_* != Page_Count");

  if (s.page_count > 0) {
    double ratio_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double expect = double(s.pages[i]) / double(s.page_count);
      if (!near(s.ratios[i], expect, options.ratio_tolerance)) {
        fail("r_" + registry.name_at(i) + " != p_/Page_Count");
      }
      if (s.ratios[i] < 0.0 || s.ratios[i] > 1.0) {
        fail("r_" + registry.name_at(i) + " outside [0,1]");
      }
      ratio_sum += s.ratios[i];
    }
    if (!near(ratio_sum, 1.0, 1e-9)) fail("sum of r_* != 1");

    const double count = s.page_count;
    if (!near(s.avg_page_duration, double(s.total_session_duration) / count,
              options.average_tolerance)) {
      fail("Avg_Page_Duration != Total_Session_Duration / Page_Count");
    }
    if (!near(s.avg_page_load, s.total_page_load / count,
              options.average_tolerance)) {
      fail("Avg_Page_Load != Total_Page_Load / Page_Count");
    }
  }
  if (s.service_count > 0 &&
      !near(s.page_per_service, double(s.page_count) / double(s.service_count),
            options.average_tolerance)) {
    fail("Page_per_Service != Page_Count / Service_Count");
  }

  if (options.check_service_membership) {
    if (!listed.contains(s.landing_srv_id)) {
      fail("Landing_Srv_ID not in Visited_Service_IDs");
    }
    if (!listed.contains(s.exit_srv_id)) {
      fail("Exit_Srv_ID not in Visited_Service_IDs");
    }
  }

  if (s.session_login_status > 1) fail("Session_Login_Status is not 0/1");
  if (s.session_login_status == 0) {
    if (s.user_pageview != 0) fail("visitor session has User_PageView > 0");
    if (s.exit_type != ExitMethod::direct) {
      fail("visitor session has a non-direct Exit_Type");
    }
  }
  if (s.age_group < 1 || s.age_group > 4) fail("Age_Group outside 1..4");
  return out;
}

}  // namespace wumkit
