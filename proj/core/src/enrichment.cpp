#include "wumkit/enrichment.hpp"

#include <algorithm>
#include <thread>
#include <tuple>

#include "wumkit/parallel.hpp"

namespace wumkit {

SessionTable::SessionTable(std::vector<PageviewEvent> events)
    : events_(std::move(events)) {
  const auto key = [](const PageviewEvent& e) {
    return std::tuple(e.session_id, e.timestamp, e.log_id);
  };
  const bool sorted = std::is_sorted(
      events_.begin(), events_.end(),
      [&](const PageviewEvent& a, const PageviewEvent& b) { return key(a) < key(b); });
  if (!sorted) {
    std::sort(events_.begin(), events_.end(),
              [&](const PageviewEvent& a, const PageviewEvent& b) {
                return key(a) < key(b);
              });
  }
  if (events_.empty()) return;
  offsets_.push_back(0);
  for (std::size_t i = 1; i < events_.size(); ++i) {
    if (events_[i].session_id != events_[i - 1].session_id) offsets_.push_back(i);
  }
  offsets_.push_back(events_.size());
}

SessionGroup SessionTable::operator[](std::size_t i) const {
  const std::size_t begin = offsets_[i];
  const std::size_t end = offsets_[i + 1];
  return {events_[begin].session_id,
          std::span<const PageviewEvent>(events_).subspan(begin, end - begin)};
}

SessionTable group_by_session(std::vector<PageviewEvent> events) {
  return SessionTable(std::move(events));
}

SessionExit determine_exit(const SessionGroup& group) {
  const PageviewEvent& last = group.events.back();
  ExitMethod method = ExitMethod::direct;
  switch (last.logout_kind) {
    case LogoutKind::none:
      method = ExitMethod::direct;
      break;
    case LogoutKind::secure_button:
      method = ExitMethod::secure_button;
      break;
    case LogoutKind::warning_window:
      method = ExitMethod::warning_window;
      break;
  }
  return {last.service_id, method};
}

void LoginCounter::add(const PageviewEvent& e) {
  if (e.login_state != LoginState::authenticated || e.user_id == 0) return;
  if (counted_.insert(e.session_id).second) ++counts_[e.user_id];
}

LoginCounts compute_user_login_counts(std::span<const PageviewEvent> events) {
  LoginCounter counter;
  for (const auto& e : events) counter.add(e);
  return counter.take();
}

LoginCounts compute_user_login_counts(const SessionTable& table) {
  LoginCounts counts;
  table.for_each([&](const SessionGroup& g) {
    for (const auto& e : g.events) {
      if (e.login_state == LoginState::authenticated && e.user_id != 0) {
        ++counts[e.user_id];
        break;
      }
    }
  });
  return counts;
}

EnrichedSession aggregate_session(const SessionGroup& group,
                                  const ServiceRegistry& registry,
                                  const LoginCounts& user_login_counts,
                                  const AgeGroupBounds& age_groups) {
  const auto& events = group.events;
  const PageviewEvent& first = events.front();
  const std::size_t n = registry.size();

  EnrichedSession s;
  s.log_id = first.log_id;
  s.session_id = group.session_id;
  s.log_date_time = first.timestamp;
  s.user_type = first.user_type;
  s.sex = first.sex;
  s.age = first.age;
  s.age_group = age_groups.group_of(first.age);
  s.user_language_tr = first.language_tr;
  s.user_location = first.location;
  s.browser_type = static_cast<std::uint8_t>(first.browser_type);
  s.referer_type = first.referer_type;
  s.landing_srv_id = first.service_id;
  const SessionExit exit = determine_exit(group);
  s.exit_srv_id = exit.service;
  s.exit_type = exit.method;

  s.visited.assign(n, 0);
  s.pages.assign(n, 0);
  s.ratios.assign(n, 0.0);

  for (const auto& e : events) {
    if (e.login_state == LoginState::authenticated) {
      ++s.user_pageview;
      if (s.user_id == 0) s.user_id = e.user_id;
    } else {
      ++s.visitor_pageview;
    }
    s.total_session_duration += e.page_duration;
    s.total_page_load += e.page_load;
    const std::size_t idx = registry.position(e.service_id);
    if (s.pages[idx]++ == 0) {
      s.visited[idx] = 1;
      s.visited_service_ids.push_back(e.service_id);
    }
  }

  s.page_count = static_cast<std::uint32_t>(events.size());
  s.service_count = static_cast<std::uint32_t>(s.visited_service_ids.size());
  s.session_login_status = s.user_pageview > 0 ? 1 : 0;
  if (s.user_id != 0) {
    const auto it = user_login_counts.find(s.user_id);
    s.logins_during_period = it == user_login_counts.end() ? 0 : it->second;
  }

  const double count = s.page_count;
  s.avg_page_duration = double(s.total_session_duration) / count;
  s.avg_page_load = s.total_page_load / count;
  s.page_per_service = count / double(s.service_count);
  for (std::size_t i = 0; i < n; ++i) s.ratios[i] = double(s.pages[i]) / count;
  return s;
}

void append_enriched_pageviews(const SessionGroup& group,
                               const EnrichedSession& session,
                               std::vector<EnrichedPageview>& out) {
  for (const auto& e : group.events) {
    EnrichedPageview p;
    p.log_id = e.log_id;
    p.session_id = e.session_id;
    p.timestamp = e.timestamp;
    p.service_id = e.service_id;
    p.page_id = e.page_id;
    p.page_duration = e.page_duration;
    p.page_load = e.page_load;
    p.login_state = e.login_state;
    p.is_logout_event = e.is_logout_event;
    p.user_id = session.user_id;
    p.user_type = session.user_type;
    p.sex = session.sex;
    p.age_group = session.age_group;
    p.browser_type = session.browser_type;
    p.user_location = session.user_location;
    out.push_back(p);
  }
}

std::vector<EnrichedPageview> enrich_pageviews(const SessionGroup& group,
                                               const EnrichedSession& session) {
  std::vector<EnrichedPageview> out;
  out.reserve(group.events.size());
  append_enriched_pageviews(group, session, out);
  return out;
}

std::vector<EnrichedSession> enrich_sessions(const SessionTable& table,
                                             const ServiceRegistry& registry,
                                             const LoginCounts& user_login_counts,
                                             const AgeGroupBounds& age_groups,
                                             unsigned threads) {
  std::vector<EnrichedSession> out(table.size());
  parallel_for(table.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = aggregate_session(table[i], registry, user_login_counts, age_groups);
    }
  });
  return out;
}

void enrich_streaming(
    const SessionTable& table, const ServiceRegistry& registry,
    const LoginCounts& user_login_counts, const AgeGroupBounds& age_groups,
    const std::function<void(const SessionGroup&, const EnrichedSession&)>& sink,
    unsigned threads, std::size_t block_size) {
  block_size = std::max<std::size_t>(block_size, 1);
  std::vector<EnrichedSession> block;
  for (std::size_t start = 0; start < table.size(); start += block_size) {
    const std::size_t stop = std::min(table.size(), start + block_size);
    block.resize(stop - start);
    parallel_for(stop - start, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        block[i] = aggregate_session(table[start + i], registry, user_login_counts,
                                     age_groups);
      }
    });
    for (std::size_t i = 0; i < block.size(); ++i) sink(table[start + i], block[i]);
  }
}

}  // namespace wumkit
