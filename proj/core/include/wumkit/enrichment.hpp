#ifndef WUMKIT_ENRICHMENT_HPP_
#define WUMKIT_ENRICHMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wumkit/model.hpp"

namespace wumkit {

/// The events of one collector-assigned session, ordered by
/// (timestamp, log_id). A view into a SessionTable.
struct SessionGroup {
  SessionId session_id = 0;
  std::span<const PageviewEvent> events;
};

/// Events sorted by (session_id, timestamp, log_id) plus group boundaries.
/// Groups come out in ascending session_id order.
class SessionTable {
 public:
  SessionTable() = default;
  explicit SessionTable(std::vector<PageviewEvent> events);

  std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  bool empty() const noexcept { return size() == 0; }
  SessionGroup operator[](std::size_t i) const;

  std::size_t event_count() const noexcept { return events_.size(); }
  std::span<const PageviewEvent> events() const noexcept { return events_; }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < size(); ++i) fn((*this)[i]);
  }

 private:
  std::vector<PageviewEvent> events_;
  std::vector<std::size_t> offsets_;
};

/// Sessionization by collector session id. Unsorted input is accepted.
SessionTable group_by_session(std::vector<PageviewEvent> events);

struct SessionExit {
  ServiceId service = 0;
  ExitMethod method = ExitMethod::direct;

  friend bool operator==(const SessionExit&, const SessionExit&) = default;
};

/// Exit service is the last pageview's service; the exit method comes from
/// the last event's logout kind.
SessionExit determine_exit(const SessionGroup& group);

using LoginCounts = std::unordered_map<UserId, std::uint32_t>;

/// Counts, per user, the sessions in which that user has at least one
/// authenticated pageview. Works on an unordered event stream.
class LoginCounter {
 public:
  void add(const PageviewEvent& e);
  const LoginCounts& counts() const noexcept { return counts_; }
  LoginCounts take() { return std::move(counts_); }

 private:
  std::unordered_set<SessionId> counted_;
  LoginCounts counts_;
};

LoginCounts compute_user_login_counts(std::span<const PageviewEvent> events);

/// Same result from an already grouped table, without the session set.
LoginCounts compute_user_login_counts(const SessionTable& table);

/// Builds one enriched session row from a group.
EnrichedSession aggregate_session(const SessionGroup& group,
                                  const ServiceRegistry& registry,
                                  const LoginCounts& user_login_counts,
                                  const AgeGroupBounds& age_groups = {});

/// One record per pageview, carrying the session's demographics.
std::vector<EnrichedPageview> enrich_pageviews(const SessionGroup& group,
                                               const EnrichedSession& session);
void append_enriched_pageviews(const SessionGroup& group,
                               const EnrichedSession& session,
                               std::vector<EnrichedPageview>& out);

/// Aggregates every group of the table, fanning out over `threads` workers
/// (0 = hardware concurrency). Output is in ascending session_id order and
/// identical for any thread count.
std::vector<EnrichedSession> enrich_sessions(const SessionTable& table,
                                             const ServiceRegistry& registry,
                                             const LoginCounts& user_login_counts,
                                             const AgeGroupBounds& age_groups = {},
                                             unsigned threads = 0);

/// Calls `sink(group, session)` for every group in ascending session order.
/// Aggregation runs in parallel over blocks of `block_size` groups; the sink
/// is always called from the calling thread.
void enrich_streaming(
    const SessionTable& table, const ServiceRegistry& registry,
    const LoginCounts& user_login_counts, const AgeGroupBounds& age_groups,
    const std::function<void(const SessionGroup&, const EnrichedSession&)>& sink,
    unsigned threads = 0, std::size_t block_size = 8192);

}  // namespace wumkit

#endif  // WUMKIT_ENRICHMENT_HPP_
