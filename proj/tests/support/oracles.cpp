#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace oracle {

std::vector<Itemset> brute_force_itemsets(const std::vector<std::vector<bool>>& rows,
                                          int items, double min_support) {
  std::vector<Itemset> out;
  if (rows.empty()) return out;
  for (std::uint32_t mask = 1; mask < (1u << items); ++mask) {
    std::vector<int> members;
    for (int i = 0; i < items; ++i) {
      if (mask & (1u << i)) members.push_back(i);
    }
    std::uint64_t count = 0;
    for (const auto& row : rows) {
      bool all = true;
      for (const int i : members) all = all && row[i];
      if (all) ++count;
    }
    if (double(count) / double(rows.size()) >= min_support) out.push_back({members, count});
  }
  std::sort(out.begin(), out.end(), [](const Itemset& a, const Itemset& b) {
    if (a.items.size() != b.items.size()) return a.items.size() < b.items.size();
    return a.items < b.items;
  });
  return out;
}

double chi_square_sf(double x, int dof, int intervals) {
  if (x <= 0.0) return 1.0;
  const double k = dof / 2.0;
  const double log_norm = -k * std::log(2.0) - std::lgamma(k);
  // density of t at t = u^2, times dt/du = 2u
  const auto g = [&](double u) {
    if (u == 0.0) return dof == 1 ? 2.0 * std::exp(log_norm) : 0.0;
    const double t = u * u;
    return std::exp(log_norm + (k - 1.0) * std::log(t) - t / 2.0) * 2.0 * u;
  };
  const double upper = std::sqrt(x);
  const int n = intervals % 2 == 0 ? intervals : intervals + 1;
  const double h = upper / n;
  double sum = g(0.0) + g(upper);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * g(i * h);
  return 1.0 - sum * h / 3.0;
}

double pearson_statistic(const std::vector<std::vector<double>>& observed, bool yates) {
  const std::size_t r = observed.size();
  const std::size_t c = observed[0].size();
  std::vector<double> row(r, 0.0), col(c, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      row[i] += observed[i][j];
      col[j] += observed[i][j];
      grand += observed[i][j];
    }
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const double e = row[i] * col[j] / grand;
      double d = std::fabs(observed[i][j] - e);
      if (yates) d = std::max(0.0, d - 0.5);
      stat += d * d / e;
    }
  }
  return stat;
}

SessionFacts rescan(const std::vector<wumkit::PageviewEvent>& events) {
  SessionFacts f;
  std::vector<wumkit::PageviewEvent> sorted = events;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.log_id < b.log_id;
  });
  for (const auto& e : sorted) {
    ++f.page_count;
    if (e.login_state == wumkit::LoginState::authenticated) {
      ++f.user_pageviews;
    } else {
      ++f.visitor_pageviews;
    }
    f.total_duration += e.page_duration;
    f.total_load += e.page_load;
    if (std::find(f.visited_in_order.begin(), f.visited_in_order.end(), e.service_id) ==
        f.visited_in_order.end()) {
      f.visited_in_order.push_back(e.service_id);
    }
    f.pages[e.service_id] += 1;
  }
  f.landing = sorted.front().service_id;
  f.exit = sorted.back().service_id;
  f.exit_type = static_cast<int>(sorted.back().logout_kind);
  return f;
}

std::map<wumkit::UserId, std::uint32_t> nested_loop_login_counts(
    const std::vector<wumkit::PageviewEvent>& events) {
  std::vector<std::pair<wumkit::UserId, wumkit::SessionId>> pairs;
  for (const auto& e : events) {
    if (e.login_state != wumkit::LoginState::authenticated || e.user_id == 0) continue;
    bool seen = false;
    for (const auto& p : pairs) seen = seen || (p.second == e.session_id);
    if (!seen) pairs.emplace_back(e.user_id, e.session_id);
  }
  std::map<wumkit::UserId, std::uint32_t> counts;
  for (const auto& p : pairs) {
    std::uint32_t n = 0;
    for (const auto& q : pairs) n += q.first == p.first ? 1 : 0;
    counts[p.first] = n;
  }
  return counts;
}

std::map<std::pair<wumkit::ServiceId, wumkit::ServiceId>, std::uint64_t> naive_transitions(
    const std::vector<wumkit::PageviewEvent>& events) {
  std::set<wumkit::SessionId> sessions;
  for (const auto& e : events) sessions.insert(e.session_id);
  std::map<std::pair<wumkit::ServiceId, wumkit::ServiceId>, std::uint64_t> out;
  for (const auto id : sessions) {
    std::vector<wumkit::PageviewEvent> mine;
    for (const auto& e : events) {
      if (e.session_id == id) mine.push_back(e);
    }
    std::sort(mine.begin(), mine.end(), [](const auto& a, const auto& b) {
      if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
      return a.log_id < b.log_id;
    });
    for (std::size_t i = 1; i < mine.size(); ++i) {
      if (mine[i].service_id != mine[i - 1].service_id) {
        ++out[{mine[i - 1].service_id, mine[i].service_id}];
      }
    }
  }
  return out;
}

}  // namespace oracle
