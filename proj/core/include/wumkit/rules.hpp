#ifndef WUMKIT_RULES_HPP_
#define WUMKIT_RULES_HPP_

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wumkit/bounce.hpp"
#include "wumkit/model.hpp"

namespace wumkit {

/// Bitmask over a transaction catalog; bit i is catalog item i.
using ItemMask = std::uint64_t;

inline constexpr std::size_t kMaxCatalogItems = 64;

/// One-hot session-by-item matrix. Rows are stored as bitmasks and
/// collapsed into (distinct row, multiplicity) pairs, so memory stays
/// bounded by the number of distinct service combinations rather than by
/// the number of sessions.
class TransactionSet {
 public:
  /// Throws ConfigError when the catalog is empty, has more than 64
  /// entries, or repeats a label.
  explicit TransactionSet(std::vector<std::string> items);

  void add(ItemMask row, std::uint64_t multiplicity = 1);
  void add(const std::vector<bool>& row);
  void merge(const TransactionSet& other);

  const std::vector<std::string>& items() const noexcept { return items_; }
  std::size_t size() const noexcept { return rows_; }
  bool empty() const noexcept { return rows_ == 0; }

  /// Distinct rows with their multiplicities, ascending by mask.
  const std::map<ItemMask, std::uint64_t>& distinct_rows() const noexcept {
    return distinct_;
  }

  /// Number of rows containing every item of `mask`.
  std::uint64_t count(ItemMask mask) const;

  /// Throws ConfigError for labels not in the catalog.
  ItemMask mask_of(const std::vector<std::string>& labels) const;
  /// Labels in catalog order.
  std::vector<std::string> labels_of(ItemMask mask) const;

 private:
  std::vector<std::string> items_;
  std::map<ItemMask, std::uint64_t> distinct_;
  std::uint64_t rows_ = 0;
};

struct TransactionOptions {
  /// Session attributes added as extra items labelled "<Attribute>=<value>".
  /// Empty by default so that itemsets contain services only.
  std::vector<SessionAttribute> attribute_items;
};

/// Incremental one-hot encoder for streams of enriched sessions.
class TransactionEncoder {
 public:
  /// Throws ConfigError for attributes without a fixed small domain
  /// (Exit_Type, Landing_Srv_ID, Exit_Srv_ID) or when the catalog would
  /// exceed 64 items.
  explicit TransactionEncoder(const ServiceRegistry& registry,
                              TransactionOptions options = {});
  void add(const EnrichedSession& s);
  const TransactionSet& transactions() const noexcept { return set_; }
  TransactionSet take() { return std::move(set_); }

 private:
  struct AttributeItems {
    SessionAttribute attribute;
    std::int64_t first_value;
    std::size_t first_bit;
    std::size_t count;
  };

  std::size_t services_;
  std::vector<AttributeItems> attributes_;
  TransactionSet set_;
};

/// One row per session; service item x is set iff s_x = 1.
TransactionSet encode_transactions(std::span<const EnrichedSession> sessions,
                                   const ServiceRegistry& registry,
                                   const TransactionOptions& options = {});

struct FrequentItemset {
  ItemMask mask = 0;
  std::vector<std::string> items;  // catalog order
  std::uint64_t count = 0;
  std::uint64_t transactions = 0;
  double support = 0.0;  // count / transactions, correctly rounded

  std::size_t size() const noexcept;
  friend bool operator==(const FrequentItemset&, const FrequentItemset&) = default;
};

/// True when count / total, as a correctly rounded double, reaches
/// `min_support`. Shared by the miner and anything that checks it.
bool meets_support(std::uint64_t count, std::uint64_t total, double min_support);

/// Level-wise Apriori with join and subset pruning. Returns every itemset
/// whose support reaches `min_support`, sorted by size and then by catalog
/// position of the items. Throws DomainError unless 0 < min_support <= 1.
std::vector<FrequentItemset> apriori(const TransactionSet& transactions,
                                     double min_support, unsigned threads = 0);

/// confidence = joint / antecedent, then the remaining metrics from
/// rule_metrics_with_confidence. Throws DomainError when the supports are
/// out of range or inconsistent.
MetricBundle rule_metrics(double antecedent_support, double consequent_support,
                          double joint_support);

/// Same as rule_metrics but with the confidence supplied by the caller, for
/// checking published tables whose confidence was computed before rounding
/// the supports.
MetricBundle rule_metrics_with_confidence(double antecedent_support,
                                          double consequent_support,
                                          double joint_support, double confidence);

struct AssociationRule {
  std::vector<std::string> antecedent;  // catalog order
  std::vector<std::string> consequent;
  ItemMask antecedent_mask = 0;
  ItemMask consequent_mask = 0;
  MetricBundle metrics;

  friend bool operator==(const AssociationRule&, const AssociationRule&) = default;
};

/// All rules A -> B with A u B frequent, A and B non-empty and disjoint, and
/// confidence >= min_confidence. Output follows the itemset order, then the
/// antecedent mask. Throws MissingSubsetError when a subset needed for a
/// rule is absent from `frequent`.
std::vector<AssociationRule> generate_rules(std::span<const FrequentItemset> frequent,
                                            double min_confidence);

enum class RuleOrdering { support, confidence, lift, zhang };

/// Throws ConfigError.
RuleOrdering parse_rule_ordering(std::string_view text);
std::string_view to_string(RuleOrdering o) noexcept;

/// Stable sort, descending by the chosen metric, ties broken by ascending
/// antecedent labels; keeps the first n.
std::vector<AssociationRule> top_rules(std::vector<AssociationRule> rules,
                                       std::size_t n, RuleOrdering ordering);

inline constexpr std::array<std::string_view, 10> kRuleColumns = {
    "antecedents", "consequents", "antecedent support", "consequent support",
    "support",     "confidence",  "lift",               "leverage",
    "conviction",  "zhangs_metric"};

/// Table-style rule report. Itemsets are joined with ", "; unbounded
/// conviction is written as "infinite". `decimals` < 0 writes exact values.
void write_rules_csv(std::span<const AssociationRule> rules, std::ostream& out,
                     int decimals = -1);

/// Reads a rule report back. Item order inside a cell is kept as written.
std::vector<AssociationRule> read_rules_csv(std::istream& in);

nlohmann::json to_json(const AssociationRule& rule);
nlohmann::json to_json(const FrequentItemset& itemset);

}  // namespace wumkit

#endif  // WUMKIT_RULES_HPP_
