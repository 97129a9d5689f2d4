#include "wumkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "wumkit/error.hpp"
#include "wumkit/parallel.hpp"

namespace wumkit {
namespace {

constexpr double kSumTolerance = 1e-9;
constexpr std::uint32_t kLoginPage = 1;
constexpr std::uint32_t kLogoutPage = 2;
constexpr std::uint32_t kFirstContentPage = 3;
constexpr std::uint32_t kContentPages = 38;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// The standard engines are fully specified; the standard distributions are
// not, so draws are done by hand to keep output identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * double(n));
  }

  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  // Failures before the first success.
  std::uint64_t geometric(double p) {
    if (p >= 1.0) return 0;
    return static_cast<std::uint64_t>(std::floor(std::log1p(-uniform()) / std::log1p(-p)));
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<double> cumulative(const std::vector<double>& probabilities) {
  std::vector<double> cdf(probabilities.size());
  std::partial_sum(probabilities.begin(), probabilities.end(), cdf.begin());
  return cdf;
}

std::size_t pick(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it != cdf.end()) return static_cast<std::size_t>(it - cdf.begin());
  // u landed in the rounding slack above the last cumulative value.
  std::size_t last = cdf.size() - 1;
  while (last > 0 && cdf[last] == cdf[last - 1]) --last;
  return last;
}

void check_distribution(const std::vector<double>& v, std::size_t size,
                        const std::string& name) {
  if (v.size() != size) {
    throw ConfigError(name + " has " + std::to_string(v.size()) + " entries, expected " +
                      std::to_string(size));
  }
  double sum = 0.0;
  for (const double x : v) {
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(name + " has an entry outside [0, 1]");
    sum += x;
  }
  if (std::fabs(sum - 1.0) > kSumTolerance) {
    throw ConfigError(name + " sums to " + std::to_string(sum) + ", not 1");
  }
}

void check_probability(double x, const std::string& name) {
  if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(name + " must be in [0, 1]");
}

void check_attribute(const AttributeDistribution& d, const std::string& name) {
  if (d.values.empty()) throw ConfigError(name + " has no categories");
  check_distribution(d.probabilities[0], d.values.size(), name + " (single-page)");
  check_distribution(d.probabilities[1], d.values.size(), name + " (multi-page)");
}

std::vector<double> normalized(std::vector<double> v) {
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  for (auto& x : v) x /= sum;
  return v;
}

AttributeDistribution attribute(std::vector<std::int64_t> values,
                                std::vector<double> single_pct,
                                std::vector<double> multi_pct) {
  return {std::move(values), {normalized(std::move(single_pct)), normalized(std::move(multi_pct))}};
}

bool is_crawler(std::int64_t browser) {
  return browser == static_cast<std::int64_t>(BrowserType::search_engine) ||
         browser == static_cast<std::int64_t>(BrowserType::text_based);
}

double crawler_share(const GeneratorConfig& c) {
  const auto& d = c.attribute_distributions.browser_type;
  double share = 0.0;
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    if (is_crawler(d.values[i])) share += d.probabilities[1][i];
  }
  return share;
}

// Solves A^T z = b by Gauss-Jordan elimination with partial pivoting.
std::vector<double> solve_transposed(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[j][i];
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
    if (std::fabs(m[pivot][col]) < 1e-300) throw ConfigError("transition system is singular");
    std::swap(m[pivot], m[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0.0) continue;
      const double f = m[r][col] / m[col][col];
      for (std::size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= m[i][i];
  return b;
}

// Exit-service distribution of a multi-page session whose length is
// 2 + Geometric(p): landing * P * p * (I - (1-p) P)^-1.
std::vector<double> multi_exit_distribution(const GeneratorConfig& c) {
  const std::size_t n = c.registry.size();
  const double p = c.session_length_geometric_p;
  std::vector<double> after_one(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      after_one[j] += c.landing_distribution[i] * c.transition_matrix[i][j];
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a[i][j] = (i == j ? 1.0 : 0.0) - (1.0 - p) * c.transition_matrix[i][j];
  auto x = solve_transposed(std::move(a), std::move(after_one));
  for (auto& v : x) v *= p;
  return x;
}

std::vector<double> service_vector_from_json(const nlohmann::json& j,
                                             const ServiceRegistry& registry,
                                             const std::string& key) {
  std::vector<double> out(registry.size(), 0.0);
  if (j.is_array()) {
    out = j.get<std::vector<double>>();
  } else if (j.is_object()) {
    for (const auto& [name, value] : j.items()) {
      const auto idx = registry.index_of(std::string_view(name));
      if (!idx) throw ConfigError(key + ": unknown service '" + name + "'");
      out[*idx] = value.get<double>();
    }
  } else {
    throw ConfigError(key + " must be an array or an object keyed by service");
  }
  return out;
}

nlohmann::json service_vector_to_json(const std::vector<double>& v,
                                      const ServiceRegistry& registry) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t i = 0; i < v.size() && i < registry.size(); ++i) {
    out[registry.name_at(i)] = v[i];
  }
  return out;
}

nlohmann::json attribute_to_json(const AttributeDistribution& d) {
  return {{"values", d.values}, {"single", d.probabilities[0]}, {"multi", d.probabilities[1]}};
}

AttributeDistribution attribute_from_json(const nlohmann::json& j,
                                          AttributeDistribution fallback) {
  if (j.contains("values")) fallback.values = j.at("values").get<std::vector<std::int64_t>>();
  if (j.contains("single")) fallback.probabilities[0] = j.at("single").get<std::vector<double>>();
  if (j.contains("multi")) fallback.probabilities[1] = j.at("multi").get<std::vector<double>>();
  return fallback;
}

Timestamp parse_period_bound(const nlohmann::json& j, const char* key) {
  const auto text = j.at(key).get<std::string>();
  const auto t = parse_iso(text);
  if (!t) throw ConfigError(std::string("period.") + key + " is not a date-time: " + text);
  return *t;
}

struct Demographics {
  std::uint8_t user_type = 1;
  std::uint8_t sex = 0;
  std::int32_t age = 0;
};

Demographics user_demographics(std::uint64_t seed, UserId user) {
  const std::uint64_t h = splitmix64(seed ^ (std::uint64_t(user) * 0x9e3779b97f4a7c15ULL));
  return {static_cast<std::uint8_t>(2 + h % 5), static_cast<std::uint8_t>(1 + (h >> 8) % 2),
          static_cast<std::int32_t>(18 + (h >> 16) % 48)};
}

// Precomputed cumulative tables shared by all partitions.
struct Sampler {
  const GeneratorConfig& config;
  std::vector<double> landing;
  std::vector<std::vector<double>> transitions;
  std::array<std::vector<double>, 2> browser, referer, language, location;
  std::uint64_t users;
  std::int64_t period_seconds;

  explicit Sampler(const GeneratorConfig& c)
      : config(c),
        landing(cumulative(c.landing_distribution)),
        users(c.user_count ? c.user_count : std::max<std::uint64_t>(1, c.session_count / 5)),
        period_seconds((c.period.end - c.period.start).count()) {
    for (const auto& row : c.transition_matrix) transitions.push_back(cumulative(row));
    const auto& a = c.attribute_distributions;
    for (std::size_t k = 0; k < 2; ++k) {
      browser[k] = cumulative(a.browser_type.probabilities[k]);
      referer[k] = cumulative(a.referer_type.probabilities[k]);
      language[k] = cumulative(a.language_tr.probabilities[k]);
      location[k] = cumulative(a.location.probabilities[k]);
    }
  }

  void session(Rng& rng, SessionId id, std::vector<PageviewEvent>& out) const {
    const auto& c = config;
    const auto& attrs = c.attribute_distributions;
    const std::size_t cls = rng.uniform() < c.single_page_probability ? 0 : 1;
    const auto browser_code = attrs.browser_type.values[pick(browser[cls], rng.uniform())];
    const auto referer_code = attrs.referer_type.values[pick(referer[cls], rng.uniform())];
    const auto language_code = attrs.language_tr.values[pick(language[cls], rng.uniform())];
    const auto location_code = attrs.location.values[pick(location[cls], rng.uniform())];

    const bool multi = cls == 1 && !is_crawler(browser_code);
    const std::uint64_t length =
        multi ? 2 + rng.geometric(c.session_length_geometric_p) : 1;

    std::vector<std::size_t> services(length);
    services[0] = pick(landing, rng.uniform());
    for (std::uint64_t i = 1; i < length; ++i) {
      services[i] = pick(transitions[services[i - 1]], rng.uniform());
    }

    const bool authenticated = multi && rng.uniform() < c.login_probability;
    UserId user = 0;
    Demographics demo;
    if (authenticated) {
      user = static_cast<UserId>(1 + rng.below(users));
      demo = user_demographics(c.seed, user);
    }
    const std::size_t exit = services.back();
    LogoutKind logout = LogoutKind::none;
    if (authenticated && rng.uniform() < c.secure_exit_probability_per_service[exit]) {
      logout = rng.uniform() < c.warning_window_share ? LogoutKind::warning_window
                                                      : LogoutKind::secure_button;
    }

    std::vector<std::int64_t> gaps(length);
    std::int64_t span = 0;
    for (std::uint64_t i = 0; i < length; ++i) {
      gaps[i] = static_cast<std::int64_t>(std::floor(rng.exponential(c.mean_page_gap_seconds)));
      if (i + 1 < length || logout != LogoutKind::none) span += gaps[i];
    }
    if (span > period_seconds) {
      for (auto& g : gaps) g = g * period_seconds / span;
      span = 0;
      for (std::uint64_t i = 0; i < length; ++i)
        if (i + 1 < length || logout != LogoutKind::none) span += gaps[i];
    }
    Timestamp t = c.period.start +
                  std::chrono::seconds(rng.below(std::uint64_t(period_seconds - span) + 1));

    PageviewEvent e;
    e.session_id = id;
    e.browser_type = static_cast<BrowserType>(browser_code);
    e.referer_type = static_cast<std::uint8_t>(referer_code);
    e.language_tr = static_cast<std::uint8_t>(language_code);
    e.location = static_cast<std::uint8_t>(location_code);
    e.user_type = demo.user_type;
    e.sex = demo.sex;
    e.age = demo.age;
    for (std::uint64_t i = 0; i < length; ++i) {
      e.timestamp = t;
      e.service_id = c.registry.id_at(services[i]);
      const bool login_page = authenticated && i == 0;
      e.page_id = login_page ? kLoginPage
                             : kFirstContentPage + static_cast<std::uint32_t>(rng.below(kContentPages));
      e.page_duration = gaps[i];
      e.page_load = std::round(rng.exponential(c.mean_page_load_seconds) * 1000.0) / 1000.0;
      e.login_state = authenticated && i > 0 ? LoginState::authenticated : LoginState::visitor;
      e.user_id = e.login_state == LoginState::authenticated ? user : 0;
      out.push_back(e);
      t += std::chrono::seconds(gaps[i]);
    }
    if (logout != LogoutKind::none) {
      e.timestamp = t;
      e.service_id = c.registry.id_at(exit);
      e.page_id = kLogoutPage;
      e.page_duration = 0;
      e.page_load = std::round(rng.exponential(c.mean_page_load_seconds) * 1000.0) / 1000.0;
      e.login_state = LoginState::authenticated;
      e.user_id = user;
      e.is_logout_event = true;
      e.logout_kind = logout;
      out.push_back(e);
    }
  }

  std::vector<PageviewEvent> partition(std::uint64_t index) const {
    const std::uint64_t first = index * kSessionsPerPartition + 1;
    const std::uint64_t last = std::min(config.session_count, first + kSessionsPerPartition - 1);
    Rng rng(partition_seed(config.seed, index));
    std::vector<PageviewEvent> out;
    out.reserve((last - first + 1) * 8);
    for (std::uint64_t id = first; id <= last; ++id) session(rng, id, out);
    return out;
  }
};

}  // namespace

void validate(const GeneratorConfig& c) {
  const std::size_t n = c.registry.size();
  if (n == 0) throw ConfigError("registry is empty");
  check_distribution(c.landing_distribution, n, "landing_distribution");
  if (c.transition_matrix.size() != n) {
    throw ConfigError("transition_matrix must have one row per service");
  }
  for (std::size_t i = 0; i < n; ++i) {
    check_distribution(c.transition_matrix[i], n,
                       "transition_matrix row " + c.registry.name_at(i));
  }
  if (!(c.session_length_geometric_p > 0.0 && c.session_length_geometric_p <= 1.0)) {
    throw ConfigError("session_length_geometric_p must be in (0, 1]");
  }
  check_probability(c.single_page_probability, "single_page_probability");
  check_probability(c.login_probability, "login_probability");
  check_probability(c.warning_window_share, "warning_window_share");
  if (c.secure_exit_probability_per_service.size() != n) {
    throw ConfigError("secure_exit_probability_per_service must have one entry per service");
  }
  for (std::size_t i = 0; i < n; ++i) {
    check_probability(c.secure_exit_probability_per_service[i],
                      "secure_exit_probability_per_service." + c.registry.name_at(i));
  }
  const auto& a = c.attribute_distributions;
  check_attribute(a.browser_type, "Browser_Type");
  check_attribute(a.referer_type, "Referer_Type");
  check_attribute(a.language_tr, "User_Language_TR");
  check_attribute(a.location, "User_Location");
  for (const auto v : a.browser_type.values)
    if (v < 1 || v > 3) throw ConfigError("Browser_Type values must be 1..3");
  for (const auto v : a.referer_type.values)
    if (v < 1 || v > 6) throw ConfigError("Referer_Type values must be 1..6");
  for (const auto v : a.language_tr.values)
    if (v < 0 || v > 1) throw ConfigError("User_Language_TR values must be 0 or 1");
  for (const auto v : a.location.values)
    if (v < 0 || v > 2) throw ConfigError("User_Location values must be 0..2");
  if (!(c.mean_page_gap_seconds >= 0.0) || !(c.mean_page_load_seconds >= 0.0)) {
    throw ConfigError("mean page gap and load must be non-negative");
  }
  if (c.period.end < c.period.start) throw ConfigError("period ends before it starts");
}

GeneratorConfig default_generator_config() {
  GeneratorConfig c;
  c.period = {*parse_iso("2022-11-01 00:00:00"), *parse_iso("2022-11-30 23:59:59")};
  const std::size_t n = c.registry.size();
  c.landing_distribution.assign(n, 0.15 / double(n - 1));
  c.landing_distribution[0] = 0.85;
  // gate mail obis pbis abis cawis form menu pbook quest
  c.transition_matrix = {
      {0.20, 0.30, 0.18, 0.08, 0.10, 0.04, 0.03, 0.04, 0.02, 0.01},
      {0.10, 0.55, 0.20, 0.04, 0.04, 0.02, 0.02, 0.01, 0.01, 0.01},
      {0.08, 0.20, 0.55, 0.05, 0.05, 0.02, 0.02, 0.01, 0.01, 0.01},
      {0.15, 0.20, 0.15, 0.35, 0.07, 0.02, 0.02, 0.02, 0.01, 0.01},
      {0.15, 0.20, 0.15, 0.05, 0.35, 0.03, 0.03, 0.02, 0.01, 0.01},
      {0.15, 0.20, 0.15, 0.05, 0.05, 0.30, 0.05, 0.03, 0.01, 0.01},
      {0.15, 0.20, 0.15, 0.05, 0.05, 0.05, 0.30, 0.03, 0.01, 0.01},
      {0.15, 0.20, 0.15, 0.05, 0.05, 0.05, 0.03, 0.30, 0.01, 0.01},
      {0.15, 0.20, 0.15, 0.05, 0.05, 0.02, 0.02, 0.02, 0.33, 0.01},
      {0.15, 0.20, 0.15, 0.05, 0.05, 0.02, 0.02, 0.02, 0.01, 0.33},
  };
  c.secure_exit_probability_per_service.assign(n, 0.5);
  auto& a = c.attribute_distributions;
  a.browser_type = attribute({1, 2, 3}, {47.55, 14.63, 37.82}, {99.17, 0.01, 0.82});
  a.referer_type = attribute({1, 2, 3, 4, 5, 6}, {1.88, 20.32, 4.02, 4.23, 0.31, 69.24},
                             {7.62, 15.44, 16.95, 24.44, 1.25, 34.29});
  a.language_tr = attribute({0, 1}, {1.53, 98.47}, {2.47, 97.53});
  a.location = attribute({0, 1, 2}, {21.37, 77.56, 1.07}, {19.61, 79.51, 0.87});
  return c;
}

nlohmann::json to_json(const GeneratorConfig& c) {
  nlohmann::json services = nlohmann::json::array();
  for (const auto& s : c.registry.entries()) services.push_back({{"id", s.id}, {"name", s.name}});
  nlohmann::json matrix = nlohmann::json::object();
  for (std::size_t i = 0; i < c.transition_matrix.size() && i < c.registry.size(); ++i) {
    matrix[c.registry.name_at(i)] = service_vector_to_json(c.transition_matrix[i], c.registry);
  }
  const auto& a = c.attribute_distributions;
  return {
      {"services", services},
      {"session_count", c.session_count},
      {"seed", c.seed},
      {"period", {{"start", format_iso(c.period.start)}, {"end", format_iso(c.period.end)}}},
      {"landing_distribution", service_vector_to_json(c.landing_distribution, c.registry)},
      {"transition_matrix", matrix},
      {"session_length_geometric_p", c.session_length_geometric_p},
      {"single_page_probability", c.single_page_probability},
      {"secure_exit_probability_per_service",
       service_vector_to_json(c.secure_exit_probability_per_service, c.registry)},
      {"login_probability", c.login_probability},
      {"warning_window_share", c.warning_window_share},
      {"attribute_distributions",
       {{"Browser_Type", attribute_to_json(a.browser_type)},
        {"Referer_Type", attribute_to_json(a.referer_type)},
        {"User_Language_TR", attribute_to_json(a.language_tr)},
        {"User_Location", attribute_to_json(a.location)}}},
      {"mean_page_gap_seconds", c.mean_page_gap_seconds},
      {"mean_page_load_seconds", c.mean_page_load_seconds},
      {"user_count", c.user_count},
  };
}

GeneratorConfig generator_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("generator config must be a JSON object");
  GeneratorConfig c = default_generator_config();
  try {
    if (j.contains("services")) {
      std::vector<Service> entries;
      for (const auto& s : j.at("services")) {
        entries.push_back({s.at("id").get<ServiceId>(), s.at("name").get<std::string>()});
      }
      c.registry = ServiceRegistry(std::move(entries));
    }
    const auto& reg = c.registry;
    if (j.contains("session_count")) c.session_count = j.at("session_count").get<std::uint64_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("period")) {
      c.period = {parse_period_bound(j.at("period"), "start"),
                  parse_period_bound(j.at("period"), "end")};
    }
    if (j.contains("landing_distribution")) {
      c.landing_distribution =
          service_vector_from_json(j.at("landing_distribution"), reg, "landing_distribution");
    }
    if (j.contains("transition_matrix")) {
      const auto& m = j.at("transition_matrix");
      c.transition_matrix.assign(reg.size(), std::vector<double>(reg.size(), 0.0));
      if (m.is_array()) {
        c.transition_matrix = m.get<std::vector<std::vector<double>>>();
      } else {
        for (const auto& [name, row] : m.items()) {
          const auto idx = reg.index_of(std::string_view(name));
          if (!idx) throw ConfigError("transition_matrix: unknown service '" + name + "'");
          c.transition_matrix[*idx] =
              service_vector_from_json(row, reg, "transition_matrix." + name);
        }
      }
    }
    if (j.contains("session_length_geometric_p")) {
      c.session_length_geometric_p = j.at("session_length_geometric_p").get<double>();
    }
    if (j.contains("single_page_probability")) {
      c.single_page_probability = j.at("single_page_probability").get<double>();
    }
    if (j.contains("secure_exit_probability_per_service")) {
      c.secure_exit_probability_per_service = service_vector_from_json(
          j.at("secure_exit_probability_per_service"), reg,
          "secure_exit_probability_per_service");
    }
    if (j.contains("login_probability")) c.login_probability = j.at("login_probability").get<double>();
    if (j.contains("warning_window_share")) {
      c.warning_window_share = j.at("warning_window_share").get<double>();
    }
    if (j.contains("attribute_distributions")) {
      const auto& d = j.at("attribute_distributions");
      auto& a = c.attribute_distributions;
      if (d.contains("Browser_Type")) a.browser_type = attribute_from_json(d.at("Browser_Type"), a.browser_type);
      if (d.contains("Referer_Type")) a.referer_type = attribute_from_json(d.at("Referer_Type"), a.referer_type);
      if (d.contains("User_Language_TR")) a.language_tr = attribute_from_json(d.at("User_Language_TR"), a.language_tr);
      if (d.contains("User_Location")) a.location = attribute_from_json(d.at("User_Location"), a.location);
    }
    if (j.contains("mean_page_gap_seconds")) {
      c.mean_page_gap_seconds = j.at("mean_page_gap_seconds").get<double>();
    }
    if (j.contains("mean_page_load_seconds")) {
      c.mean_page_load_seconds = j.at("mean_page_load_seconds").get<double>();
    }
    if (j.contains("user_count")) c.user_count = j.at("user_count").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("generator config: ") + e.what());
  }
  return c;
}

GroundTruth describe_ground_truth(const GeneratorConfig& c) {
  validate(c);
  const std::size_t n = c.registry.size();
  const double p = c.session_length_geometric_p;
  const double q = c.single_page_probability;
  GroundTruth g;
  g.crawler_share_of_multi = crawler_share(c);
  g.bounce_rate = q + (1.0 - q) * g.crawler_share_of_multi;
  const double multi = 1.0 - g.bounce_rate;
  g.landing_share = c.landing_distribution;
  g.mean_pages_per_multi_session = 2.0 + (1.0 - p) / p;

  const auto x = multi_exit_distribution(c);
  g.exit_share.resize(n);
  g.secure_exit_rate.assign(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    g.exit_share[s] = g.bounce_rate * c.landing_distribution[s] + multi * x[s];
    const double secure =
        multi * x[s] * c.login_probability * c.secure_exit_probability_per_service[s];
    g.global_secure_exit_rate += secure;
    if (g.exit_share[s] > 0.0) g.secure_exit_rate[s] = secure / g.exit_share[s];
  }

  // A multi-page session stays on its landing service when each of its
  // 1 + G transitions is a self-loop: E[P_ss^(1+G)] = P_ss p / (1 - (1-p) P_ss).
  double stay = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double pss = c.transition_matrix[s][s];
    stay += c.landing_distribution[s] * pss * p / (1.0 - (1.0 - p) * pss);
  }
  g.single_service_probability = g.bounce_rate + multi * stay;
  return g;
}

nlohmann::json to_json(const GroundTruth& g, const ServiceRegistry& registry) {
  return {
      {"bounce_rate", g.bounce_rate},
      {"crawler_share_of_multi", g.crawler_share_of_multi},
      {"landing_share", service_vector_to_json(g.landing_share, registry)},
      {"exit_share", service_vector_to_json(g.exit_share, registry)},
      {"secure_exit_rate", service_vector_to_json(g.secure_exit_rate, registry)},
      {"global_secure_exit_rate", g.global_secure_exit_rate},
      {"single_service_probability", g.single_service_probability},
      {"mean_pages_per_multi_session", g.mean_pages_per_multi_session},
  };
}

GeneratorConfig calibrate(GeneratorConfig c, const CalibrationTargets& t) {
  const std::size_t n = c.registry.size();

  if (!t.landing_share.empty()) {
    std::vector<bool> pinned(n, false);
    double pinned_mass = 0.0;
    for (const auto& [name, share] : t.landing_share) {
      const auto idx = c.registry.index_of(std::string_view(name));
      if (!idx) throw UnknownServiceError(name);
      check_probability(share, "landing target for " + name);
      c.landing_distribution[*idx] = share;
      pinned[*idx] = true;
      pinned_mass += share;
    }
    const auto free = static_cast<std::size_t>(std::count(pinned.begin(), pinned.end(), false));
    if (pinned_mass > 1.0 + kSumTolerance || (free == 0 && std::fabs(pinned_mass - 1.0) > kSumTolerance)) {
      throw ConfigError("landing targets do not form a distribution");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!pinned[i]) c.landing_distribution[i] = (1.0 - pinned_mass) / double(free);
    }
  }

  const double crawler = crawler_share(c);
  if (crawler >= 1.0 || t.bounce_rate < crawler) {
    throw ConfigError("bounce target is below the crawler floor of the browser mix");
  }
  c.single_page_probability = (t.bounce_rate - crawler) / (1.0 - crawler);
  check_probability(c.single_page_probability, "calibrated single_page_probability");

  // Secure-exit probabilities enter the ground truth linearly, so the
  // per-service targets are met exactly and one common rate fills the rest.
  c.secure_exit_probability_per_service.assign(n, 0.0);
  const GroundTruth g = describe_ground_truth(c);
  const double multi = 1.0 - g.bounce_rate;
  const auto x = multi_exit_distribution(c);
  const auto reach = [&](std::size_t s) { return multi * x[s] * c.login_probability; };

  std::vector<bool> fixed(n, false);
  double fixed_secure = 0.0;
  for (const auto& [name, rate] : t.service_secure_exit_rate) {
    const auto idx = c.registry.index_of(std::string_view(name));
    if (!idx) throw UnknownServiceError(name);
    const double e = reach(*idx) > 0.0 ? rate * g.exit_share[*idx] / reach(*idx) : 2.0;
    if (!(e >= 0.0 && e <= 1.0)) {
      throw ConfigError("secure-exit target for " + name + " is unreachable");
    }
    c.secure_exit_probability_per_service[*idx] = e;
    fixed[*idx] = true;
    fixed_secure += reach(*idx) * e;
  }
  double other_reach = 0.0;
  for (std::size_t s = 0; s < n; ++s)
    if (!fixed[s]) other_reach += reach(s);
  const double remaining = t.global_secure_exit_rate - fixed_secure;
  const double common = other_reach > 0.0 ? remaining / other_reach : 0.0;
  if (!(common >= 0.0 && common <= 1.0) || (other_reach == 0.0 && std::fabs(remaining) > 1e-12)) {
    throw ConfigError("global secure-exit target is unreachable");
  }
  for (std::size_t s = 0; s < n; ++s)
    if (!fixed[s]) c.secure_exit_probability_per_service[s] = common;
  return c;
}

std::uint64_t partition_seed(std::uint64_t seed, std::uint64_t partition) {
  return splitmix64(splitmix64(seed) ^ splitmix64(partition + 0x632be59bd9b4e019ULL));
}

void generate(const GeneratorConfig& config, const EventSink& sink, unsigned threads) {
  validate(config);
  if (config.session_count == 0) return;
  const Sampler sampler(config);
  const std::uint64_t partitions =
      (config.session_count + kSessionsPerPartition - 1) / kSessionsPerPartition;
  const std::uint64_t wave = resolve_thread_count(threads);
  LogId next_log_id = 1;
  for (std::uint64_t first = 0; first < partitions; first += wave) {
    const std::uint64_t count = std::min(wave, partitions - first);
    std::vector<std::vector<PageviewEvent>> batch(count);
    parallel_for(
        count, threads,
        [&](std::size_t begin, std::size_t end) {
          for (std::size_t i = begin; i < end; ++i) batch[i] = sampler.partition(first + i);
        },
        1);
    for (auto& events : batch) {
      for (auto& e : events) {
        e.log_id = next_log_id++;
        sink(e);
      }
      events = {};
    }
  }
}

std::vector<PageviewEvent> generate(const GeneratorConfig& config, unsigned threads) {
  std::vector<PageviewEvent> out;
  generate(config, [&](const PageviewEvent& e) { out.push_back(e); }, threads);
  return out;
}

}  // namespace wumkit
