#ifndef WUMKIT_SYNTH_HPP_
#define WUMKIT_SYNTH_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wumkit/model.hpp"
#include "wumkit/time.hpp"

namespace wumkit {

/// Category probabilities of one client attribute, separately for sessions
/// drawn into the single-page class (index 0) and the multi-page class
/// (index 1). `values` are the category codes written to the event.
struct AttributeDistribution {
  std::vector<std::int64_t> values;
  std::array<std::vector<double>, 2> probabilities;
};

struct ClientAttributeDistributions {
  AttributeDistribution browser_type;
  AttributeDistribution referer_type;
  AttributeDistribution language_tr;
  AttributeDistribution location;
};

/// Parameters of the synthetic clickstream. Vectors indexed by service are
/// aligned with `registry`.
struct GeneratorConfig {
  ServiceRegistry registry = ServiceRegistry::standard();
  std::uint64_t session_count = 10000;
  std::uint64_t seed = 1;
  TimeRange period{};

  std::vector<double> landing_distribution;
  std::vector<std::vector<double>> transition_matrix;  // row-stochastic
  double session_length_geometric_p = 0.156;
  double single_page_probability = 0.1284;
  std::vector<double> secure_exit_probability_per_service;
  double login_probability = 0.9;
  /// Share of secure exits that go through the timeout warning window
  /// instead of the logout button.
  double warning_window_share = 0.05;
  ClientAttributeDistributions attribute_distributions;

  double mean_page_gap_seconds = 45.0;
  double mean_page_load_seconds = 0.19;
  /// Size of the registered-user pool; 0 picks session_count / 5.
  std::uint64_t user_count = 0;
};

/// Throws ConfigError naming the first violated constraint: probability
/// vectors and transition rows must sum to 1 within 1e-9, entries must lie
/// in [0, 1], the geometric p in (0, 1], and the period must be ordered.
void validate(const GeneratorConfig& config);

/// Ten-service portal profile with gate-heavy landing, client attribute
/// mixes observed on a production portal and a November 2022 period. The
/// bounce and exit parameters are rough; calibrate() tunes them.
GeneratorConfig default_generator_config();

nlohmann::json to_json(const GeneratorConfig& config);

/// Reads a JSON config. Missing keys keep the default_generator_config()
/// value. Service-indexed vectors may be objects keyed by service name or
/// arrays in registry order. Throws ConfigError.
GeneratorConfig generator_config_from_json(const nlohmann::json& j);

/// Closed-form expectations implied by a config.
struct GroundTruth {
  double bounce_rate = 0.0;
  /// Multi-page draws forced to a single page by crawler browser types.
  double crawler_share_of_multi = 0.0;
  std::vector<double> landing_share;
  std::vector<double> exit_share;
  /// P(secure exit | session exits at service).
  std::vector<double> secure_exit_rate;
  double global_secure_exit_rate = 0.0;
  double single_service_probability = 0.0;
  double mean_pages_per_multi_session = 0.0;
};

GroundTruth describe_ground_truth(const GeneratorConfig& config);

nlohmann::json to_json(const GroundTruth& truth, const ServiceRegistry& registry);

struct CalibrationTargets {
  double bounce_rate = 0.1284;
  /// Landing shares to pin; the remaining mass is split evenly over the
  /// other services.
  std::map<std::string, double> landing_share{{"gate", 0.85}};
  double global_secure_exit_rate = 0.5;
  std::map<std::string, double> service_secure_exit_rate{{"obis", 0.75},
                                                         {"mail", 0.75}};
};

/// Adjusts single_page_probability, landing_distribution and the per-service
/// secure-exit probabilities so that describe_ground_truth hits the
/// targets; every other service shares one secure-exit probability. Throws
/// ConfigError when a target is unreachable with the config's transition
/// structure and login probability.
GeneratorConfig calibrate(GeneratorConfig config, const CalibrationTargets& targets = {});

/// Deterministic 64-bit sub-seed for a partition of the session id space.
std::uint64_t partition_seed(std::uint64_t seed, std::uint64_t partition);

/// Sessions per RNG partition.
inline constexpr std::uint64_t kSessionsPerPartition = 4096;

using EventSink = std::function<void(const PageviewEvent&)>;

/// Streams events in (session_id, timestamp) order; session ids are dense
/// 1..session_count and log ids dense from 1. Output depends only on the
/// config, never on `threads`. Validates the config first.
void generate(const GeneratorConfig& config, const EventSink& sink, unsigned threads = 0);

std::vector<PageviewEvent> generate(const GeneratorConfig& config, unsigned threads = 0);

}  // namespace wumkit

#endif  // WUMKIT_SYNTH_HPP_
