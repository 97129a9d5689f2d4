#ifndef WUMKIT_MODEL_HPP_
#define WUMKIT_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wumkit/time.hpp"

namespace wumkit {

using ServiceId = std::uint32_t;
using SessionId = std::uint64_t;
using LogId = std::uint64_t;
using UserId = std::uint32_t;

struct Service {
  ServiceId id = 0;
  std::string name;

  friend bool operator==(const Service&, const Service&) = default;
};

/// Ordered catalog of portal services. Order matters: it fixes the column
/// order of the per-service s_/p_/r_ vectors and the transaction catalog.
class ServiceRegistry {
 public:
  /// Throws ConfigError on duplicate ids or names, id 0, or a name that is
  /// not lowercase [a-z0-9_]+.
  explicit ServiceRegistry(std::vector<Service> entries);

  /// gate, mail, obis, pbis, abis, cawis, form, menu, pbook, quest with ids
  /// 1..10 in that order.
  static const ServiceRegistry& standard();

  /// Parses "id,name" lines (header optional, '#' comments allowed).
  static ServiceRegistry parse(std::string_view text);

  std::span<const Service> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  bool contains(ServiceId id) const noexcept { return index_of(id).has_value(); }
  std::optional<std::size_t> index_of(ServiceId id) const noexcept;
  std::optional<std::size_t> index_of(std::string_view name) const noexcept;
  /// Throws UnknownServiceError.
  std::size_t position(ServiceId id) const;
  const std::string& name_of(ServiceId id) const;
  ServiceId id_at(std::size_t index) const { return entries_.at(index).id; }
  const std::string& name_at(std::size_t index) const {
    return entries_.at(index).name;
  }

  friend bool operator==(const ServiceRegistry& a, const ServiceRegistry& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<Service> entries_;
  std::vector<std::int32_t> dense_;  // id -> index, -1 when absent
};

/// Looks a service up by exact lowercase name or by decimal id. Throws
/// UnknownServiceError naming the token when nothing matches.
ServiceId resolve_service(std::string_view name_or_id,
                          const ServiceRegistry& registry);
ServiceId resolve_service(ServiceId id, const ServiceRegistry& registry);

enum class LoginState : std::uint8_t { visitor = 0, authenticated = 1 };

enum class LogoutKind : std::uint8_t {
  none = 0,
  secure_button = 1,
  warning_window = 2,
};

enum class BrowserType : std::uint8_t {
  standard = 1,
  search_engine = 2,
  text_based = 3,
};

/// How a session ended. Codes match the Exit_Type column.
enum class ExitMethod : std::uint8_t {
  direct = 0,
  secure_button = 1,
  warning_window = 2,
};

/// Secure button and warning-window logouts both count as a regular
/// session termination in reports.
constexpr bool is_regular_termination(ExitMethod m) noexcept {
  return m != ExitMethod::direct;
}

std::string_view to_string(ExitMethod m) noexcept;

/// One raw pageview record from the collector export.
struct PageviewEvent {
  LogId log_id = 0;
  SessionId session_id = 0;
  Timestamp timestamp{};
  UserId user_id = 0;  // 0 = anonymous visitor
  ServiceId service_id = 0;
  std::uint32_t page_id = 0;
  std::int64_t page_duration = 0;  // seconds
  double page_load = 0.0;          // generation time, seconds
  LoginState login_state = LoginState::visitor;
  bool is_logout_event = false;
  LogoutKind logout_kind = LogoutKind::none;
  BrowserType browser_type = BrowserType::standard;
  std::uint8_t referer_type = 6;  // 1..6
  std::uint8_t language_tr = 1;   // 0 other, 1 Turkish
  std::uint8_t location = 0;      // 0 in-country, 1 internal, 2 abroad
  std::uint8_t user_type = 1;
  std::uint8_t sex = 0;  // 0 undefined, 1 male, 2 female
  std::int32_t age = 0;

  friend bool operator==(const PageviewEvent&, const PageviewEvent&) = default;
};

struct EventRejection {
  std::string field;
  std::string reason;

  std::string message() const { return field + " " + reason; }
};

/// Checks every per-record invariant of a raw event. Service membership is
/// checked separately against a registry by the reader.
std::optional<EventRejection> validate_event(const PageviewEvent& e);

/// Age_Group buckets: 1 = up to group1_max, 2 = up to group2_max,
/// 3 = up to group3_max, 4 = older.
struct AgeGroupBounds {
  std::int32_t group1_max = 22;
  std::int32_t group2_max = 30;
  std::int32_t group3_max = 45;

  std::uint8_t group_of(std::int32_t age) const noexcept {
    if (age <= group1_max) return 1;
    if (age <= group2_max) return 2;
    if (age <= group3_max) return 3;
    return 4;
  }
};

/// One row of the enriched session dataset. The three vectors are aligned
/// with the registry order the session was built against.
struct EnrichedSession {
  LogId log_id = 0;
  SessionId session_id = 0;
  Timestamp log_date_time{};
  UserId user_id = 0;
  std::uint8_t session_login_status = 0;
  std::uint32_t logins_during_period = 0;
  std::uint8_t user_type = 0;
  std::uint8_t sex = 0;
  std::int32_t age = 0;
  std::uint8_t age_group = 1;
  std::uint8_t user_language_tr = 0;
  std::uint8_t user_location = 0;
  std::uint8_t browser_type = 1;
  std::uint8_t referer_type = 6;
  ServiceId landing_srv_id = 0;
  ServiceId exit_srv_id = 0;
  ExitMethod exit_type = ExitMethod::direct;
  std::int64_t total_session_duration = 0;
  double avg_page_duration = 0.0;
  double total_page_load = 0.0;
  double avg_page_load = 0.0;
  std::uint32_t page_count = 0;
  std::uint32_t visitor_pageview = 0;
  std::uint32_t user_pageview = 0;
  std::uint32_t service_count = 0;
  double page_per_service = 0.0;
  std::vector<ServiceId> visited_service_ids;  // first-visit order

  std::vector<std::uint8_t> visited;  // s_<name>
  std::vector<std::uint32_t> pages;   // p_<name>
  std::vector<double> ratios;         // r_<name>

  friend bool operator==(const EnrichedSession&,
                         const EnrichedSession&) = default;
};

/// Averages in a serialized dataset carry 2-decimal rounding of both the
/// average and the total it is derived from.
inline constexpr double kSerializedAverageTolerance = 0.01;

struct InvariantOptions {
  double average_tolerance = 1e-9;
  double ratio_tolerance = 1e-9;
  /// Landing and exit services must appear in Visited_Service_IDs.
  bool check_service_membership = true;
};

/// Returns one human-readable line per violated invariant; empty when the
/// session is consistent.
std::vector<std::string> check_invariants(const EnrichedSession& s,
                                          const ServiceRegistry& registry,
                                          const InvariantOptions& options = {});

/// One row of the enriched pageview dataset: the raw pageview plus
/// demographics inherited from its session.
struct EnrichedPageview {
  LogId log_id = 0;
  SessionId session_id = 0;
  Timestamp timestamp{};
  ServiceId service_id = 0;
  std::uint32_t page_id = 0;
  std::int64_t page_duration = 0;
  double page_load = 0.0;
  LoginState login_state = LoginState::visitor;
  bool is_logout_event = false;
  UserId user_id = 0;
  std::uint8_t user_type = 0;
  std::uint8_t sex = 0;
  std::uint8_t age_group = 1;
  std::uint8_t browser_type = 1;
  std::uint8_t user_location = 0;

  friend bool operator==(const EnrichedPageview&,
                         const EnrichedPageview&) = default;
};

/// Association-rule metrics. conviction is +infinity for exact rules.
struct MetricBundle {
  double antecedent_support = 0.0;
  double consequent_support = 0.0;
  double support = 0.0;
  double confidence = 0.0;
  double lift = 0.0;
  double leverage = 0.0;
  double conviction = 0.0;
  double zhang = 0.0;

  friend bool operator==(const MetricBundle&, const MetricBundle&) = default;
};

}  // namespace wumkit

#endif  // WUMKIT_MODEL_HPP_
