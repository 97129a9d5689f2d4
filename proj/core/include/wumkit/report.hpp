#ifndef WUMKIT_REPORT_HPP_
#define WUMKIT_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "wumkit/bounce.hpp"
#include "wumkit/enrichment.hpp"
#include "wumkit/graphs.hpp"
#include "wumkit/model.hpp"
#include "wumkit/rules.hpp"

namespace wumkit {

std::string_view tool_version() noexcept;

struct AnalysisToggles {
  bool bounce = true;
  bool chisq = true;
  bool exits = true;
  bool transitions = true;
  bool rules = true;
};

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path output_dir;
  std::optional<std::filesystem::path> registry_file;
  AnalysisToggles analyses;

  double min_support = 0.25;
  double min_confidence = 0.98;
  double significance = kSignificanceLevel;
  TableMode chisq_mode = TableMode::counts;
  YatesPolicy yates = YatesPolicy::automatic;
  Normalization normalization = Normalization::per_source;
  std::uint64_t seed = 1;
  std::size_t top_rules = 30;
  RuleOrdering rule_ordering = RuleOrdering::lift;
  std::unordered_set<std::uint32_t> relogin_pages;
  TransactionOptions transactions;
  AgeGroupBounds age_groups;
  unsigned threads = 0;
};

/// Throws ConfigError when a threshold is outside (0, 1].
void validate(const PipelineConfig& config);

nlohmann::json to_json(const PipelineConfig& config);

/// Reads the layout written by to_json(PipelineConfig). Missing keys keep
/// their value from `base`; unknown keys and bad values throw ConfigError.
PipelineConfig pipeline_config_from_json(const nlohmann::json& j, PipelineConfig base = {});

struct ChiSquareEntry {
  ContingencyTable table;
  std::optional<ChiSquareResult> result;  // empty when the table is degenerate
  std::string error;
};

struct RuleReport {
  std::uint64_t transactions = 0;
  std::vector<FrequentItemset> itemsets;
  std::vector<AssociationRule> rules;      // every rule passing the thresholds
  std::vector<AssociationRule> top;        // top_rules(rules, ...)
};

struct AnalysisResults {
  std::optional<BounceStats> bounce;
  std::optional<std::vector<ChiSquareEntry>> chisq;
  std::optional<TransitionGraph> exits;
  std::optional<TransitionGraph> transitions;
  std::optional<RuleReport> rules;
};

/// Runs the enabled analyses over a stream of (group, session) pairs with
/// bounded memory: every analysis keeps only counters. Sessions read from an
/// enriched dataset have no group; feed them through add(session) and the
/// transition analysis is skipped for them.
class SessionAnalyzer {
 public:
  SessionAnalyzer(const ServiceRegistry& registry, const PipelineConfig& config);

  void add(const SessionGroup& group, const EnrichedSession& session);
  void add(const EnrichedSession& session);

  /// Applies the chi-squared tests and Apriori to the accumulated counts.
  AnalysisResults finish() const;

 private:
  const ServiceRegistry& registry_;
  const PipelineConfig& config_;
  BounceCounter bounce_;
  std::vector<ContingencyCounter> contingency_;
  ExitCounter exits_;
  TransitionCounter transitions_;
  TransactionEncoder encoder_;
  bool saw_groups_ = false;
};

/// Enriches every group of `table` and analyzes it in one streaming pass.
/// `on_session` (optional) sees each enriched session, e.g. to write the
/// datasets as they are produced.
AnalysisResults analyze_table(
    const SessionTable& table, const ServiceRegistry& registry,
    const PipelineConfig& config,
    const std::function<void(const SessionGroup&, const EnrichedSession&)>& on_session = {});

nlohmann::json to_json(const std::vector<ChiSquareEntry>& entries);
nlohmann::json to_json(const RuleReport& report);
nlohmann::json graph_summary(const TransitionGraph& graph);

/// One JSON document with a block per analysis (null when it did not run),
/// the tool version, the config echo and the assumption flags. Keys are
/// sorted, so equal inputs give byte-identical text.
nlohmann::json emit_summary(const AnalysisResults& results, const PipelineConfig& config);

}  // namespace wumkit

#endif  // WUMKIT_REPORT_HPP_
