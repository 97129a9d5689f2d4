#include "wumkit/rules.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "wumkit/csv.hpp"
#include "wumkit/error.hpp"
#include "wumkit/parallel.hpp"

namespace wumkit {
namespace {

constexpr double kSupportSlack = 1e-12;

struct AttributeDomain {
  SessionAttribute attribute;
  std::int64_t first;
  std::int64_t last;
};

constexpr std::array<AttributeDomain, 8> kAttributeDomains = {{
    {SessionAttribute::browser_type, 1, 3},
    {SessionAttribute::referer_type, 1, 6},
    {SessionAttribute::user_language_tr, 0, 1},
    {SessionAttribute::user_location, 0, 2},
    {SessionAttribute::user_type, 1, 9},
    {SessionAttribute::sex, 0, 2},
    {SessionAttribute::age_group, 1, 4},
    {SessionAttribute::session_login_status, 0, 1},
}};

ItemMask bit(std::size_t i) { return ItemMask{1} << i; }

ItemMask highest_bit(ItemMask m) { return m == 0 ? 0 : bit(63 - std::countl_zero(m)); }

// Lexicographic comparison of the catalog positions set in each mask.
bool positions_less(ItemMask a, ItemMask b) {
  while (a != 0 && b != 0) {
    const int ia = std::countr_zero(a);
    const int ib = std::countr_zero(b);
    if (ia != ib) return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

bool itemset_less(ItemMask a, ItemMask b) {
  const int pa = std::popcount(a);
  const int pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  return positions_less(a, b);
}

std::string join_items(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

std::vector<std::string> split_items(std::string_view cell) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= cell.size()) {
    const auto comma = cell.find(',', pos);
    std::string_view item = cell.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string format_metric(double value, int decimals) {
  if (std::isinf(value)) return "infinite";
  if (decimals < 0) return csv::format_exact(value);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

double metric_of(const AssociationRule& r, RuleOrdering o) {
  switch (o) {
    case RuleOrdering::support:
      return r.metrics.support;
    case RuleOrdering::confidence:
      return r.metrics.confidence;
    case RuleOrdering::lift:
      return r.metrics.lift;
    case RuleOrdering::zhang:
      return r.metrics.zhang;
  }
  return 0.0;
}

void check_fraction(double v, std::string_view name, bool allow_zero) {
  if (!std::isfinite(v) || v > 1.0 + kSupportSlack || v < 0.0 ||
      (!allow_zero && v == 0.0)) {
    throw DomainError(std::string(name) + " must be in " +
                      (allow_zero ? "[0, 1]" : "(0, 1]") + ", got " +
                      csv::format_exact(v));
  }
}

}  // namespace

TransactionSet::TransactionSet(std::vector<std::string> items) : items_(std::move(items)) {
  if (items_.empty()) throw ConfigError("transaction catalog is empty");
  if (items_.size() > kMaxCatalogItems) {
    throw ConfigError("transaction catalog has " + std::to_string(items_.size()) +
                      " items; at most 64 are supported");
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : items_) {
    if (!seen.insert(label).second) {
      throw ConfigError("duplicate catalog item '" + label + "'");
    }
  }
}

void TransactionSet::add(ItemMask row, std::uint64_t multiplicity) {
  if (items_.size() < 64 && (row >> items_.size()) != 0) {
    throw DomainError("transaction row sets bits beyond the catalog");
  }
  if (multiplicity == 0) return;
  distinct_[row] += multiplicity;
  rows_ += multiplicity;
}

void TransactionSet::add(const std::vector<bool>& row) {
  if (row.size() != items_.size()) {
    throw DomainError("transaction row length " + std::to_string(row.size()) +
                      " does not match catalog size " + std::to_string(items_.size()));
  }
  ItemMask mask = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i]) mask |= bit(i);
  }
  add(mask);
}

void TransactionSet::merge(const TransactionSet& other) {
  if (other.items_ != items_) {
    throw DomainError("cannot merge transaction sets with different catalogs");
  }
  for (const auto& [mask, n] : other.distinct_) add(mask, n);
}

std::uint64_t TransactionSet::count(ItemMask mask) const {
  std::uint64_t n = 0;
  for (const auto& [row, multiplicity] : distinct_) {
    if ((row & mask) == mask) n += multiplicity;
  }
  return n;
}

ItemMask TransactionSet::mask_of(const std::vector<std::string>& labels) const {
  ItemMask mask = 0;
  for (const auto& label : labels) {
    const auto it = std::find(items_.begin(), items_.end(), label);
    if (it == items_.end()) throw ConfigError("unknown catalog item '" + label + "'");
    mask |= bit(static_cast<std::size_t>(it - items_.begin()));
  }
  return mask;
}

std::vector<std::string> TransactionSet::labels_of(ItemMask mask) const {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (mask & bit(i)) labels.push_back(items_[i]);
  }
  return labels;
}

namespace {

std::vector<std::string> encoder_catalog(const ServiceRegistry& registry,
                                         const TransactionOptions& options) {
  std::vector<std::string> items;
  for (const auto& s : registry.entries()) items.push_back(s.name);
  for (const auto attribute : options.attribute_items) {
    const auto it = std::find_if(kAttributeDomains.begin(), kAttributeDomains.end(),
                                 [&](const auto& d) { return d.attribute == attribute; });
    if (it == kAttributeDomains.end()) {
      throw ConfigError("attribute " + std::string(to_string(attribute)) +
                        " cannot be used as a transaction item");
    }
    for (std::int64_t v = it->first; v <= it->last; ++v) {
      items.push_back(std::string(to_string(attribute)) + "=" + std::to_string(v));
    }
  }
  return items;
}

}  // namespace

TransactionEncoder::TransactionEncoder(const ServiceRegistry& registry,
                                       TransactionOptions options)
    : services_(registry.size()), set_(encoder_catalog(registry, options)) {
  std::size_t next_bit = services_;
  for (const auto attribute : options.attribute_items) {
    const auto& d = *std::find_if(kAttributeDomains.begin(), kAttributeDomains.end(),
                                  [&](const auto& x) { return x.attribute == attribute; });
    const auto count = static_cast<std::size_t>(d.last - d.first + 1);
    attributes_.push_back({attribute, d.first, next_bit, count});
    next_bit += count;
  }
}

void TransactionEncoder::add(const EnrichedSession& s) {
  if (s.visited.size() != services_) {
    throw DomainError("session " + std::to_string(s.session_id) +
                      " has a service vector of the wrong length");
  }
  ItemMask mask = 0;
  for (std::size_t i = 0; i < services_; ++i) {
    if (s.visited[i]) mask |= bit(i);
  }
  for (const auto& a : attributes_) {
    const std::int64_t offset = attribute_value(s, a.attribute) - a.first_value;
    if (offset >= 0 && offset < static_cast<std::int64_t>(a.count)) {
      mask |= bit(a.first_bit + static_cast<std::size_t>(offset));
    }
  }
  set_.add(mask);
}

TransactionSet encode_transactions(std::span<const EnrichedSession> sessions,
                                   const ServiceRegistry& registry,
                                   const TransactionOptions& options) {
  TransactionEncoder encoder(registry, options);
  for (const auto& s : sessions) encoder.add(s);
  return encoder.take();
}

std::size_t FrequentItemset::size() const noexcept {
  return static_cast<std::size_t>(std::popcount(mask));
}

bool meets_support(std::uint64_t count, std::uint64_t total, double min_support) {
  if (total == 0) return false;
  return double(count) / double(total) >= min_support;
}

std::vector<FrequentItemset> apriori(const TransactionSet& transactions,
                                     double min_support, unsigned threads) {
  if (!(min_support > 0.0 && min_support <= 1.0)) {
    throw DomainError("min_support must be in (0, 1], got " +
                      csv::format_exact(min_support));
  }
  std::vector<FrequentItemset> result;
  const std::uint64_t total = transactions.size();
  if (total == 0) return result;

  const std::vector<std::pair<ItemMask, std::uint64_t>> rows(
      transactions.distinct_rows().begin(), transactions.distinct_rows().end());

  // Support counting is sharded over distinct rows; shard totals add up.
  const auto count_all = [&](const std::vector<ItemMask>& candidates) {
    std::vector<std::uint64_t> counts(candidates.size(), 0);
    std::mutex mutex;
    parallel_for(rows.size(), threads, [&](std::size_t begin, std::size_t end) {
      std::vector<std::uint64_t> local(candidates.size(), 0);
      for (std::size_t r = begin; r < end; ++r) {
        for (std::size_t c = 0; c < candidates.size(); ++c) {
          if ((rows[r].first & candidates[c]) == candidates[c]) local[c] += rows[r].second;
        }
      }
      std::lock_guard lock(mutex);
      for (std::size_t c = 0; c < counts.size(); ++c) counts[c] += local[c];
    });
    return counts;
  };

  std::vector<ItemMask> candidates;
  for (std::size_t i = 0; i < transactions.items().size(); ++i) candidates.push_back(bit(i));

  while (!candidates.empty()) {
    const auto counts = count_all(candidates);
    std::vector<ItemMask> level;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (!meets_support(counts[c], total, min_support)) continue;
      level.push_back(candidates[c]);
      result.push_back({candidates[c], transactions.labels_of(candidates[c]), counts[c],
                        total, double(counts[c]) / double(total)});
    }
    std::sort(level.begin(), level.end(), positions_less);

    // Join itemsets that agree on everything but their last item, then
    // drop candidates with an infrequent (k-1)-subset.
    const std::unordered_set<ItemMask> frequent(level.begin(), level.end());
    std::vector<ItemMask> next;
    for (std::size_t a = 0; a < level.size(); ++a) {
      const ItemMask prefix = level[a] & ~highest_bit(level[a]);
      for (std::size_t b = a + 1; b < level.size(); ++b) {
        if ((level[b] & ~highest_bit(level[b])) != prefix) break;
        const ItemMask candidate = level[a] | level[b];
        bool keep = true;
        for (ItemMask rest = candidate; rest != 0 && keep; rest &= rest - 1) {
          const ItemMask drop = rest & (~rest + 1);
          if (!frequent.count(candidate & ~drop)) keep = false;
        }
        if (keep) next.push_back(candidate);
      }
    }
    candidates = std::move(next);
  }

  std::sort(result.begin(), result.end(),
            [](const FrequentItemset& x, const FrequentItemset& y) {
              return itemset_less(x.mask, y.mask);
            });
  return result;
}

MetricBundle rule_metrics_with_confidence(double antecedent_support,
                                          double consequent_support,
                                          double joint_support, double confidence) {
  check_fraction(antecedent_support, "antecedent support", false);
  check_fraction(consequent_support, "consequent support", false);
  check_fraction(joint_support, "joint support", true);
  check_fraction(confidence, "confidence", true);
  if (joint_support > std::min(antecedent_support, consequent_support) + kSupportSlack) {
    throw DomainError("joint support exceeds a marginal support");
  }
  MetricBundle m;
  m.antecedent_support = antecedent_support;
  m.consequent_support = consequent_support;
  m.support = joint_support;
  m.confidence = confidence;
  m.lift = confidence / consequent_support;
  m.leverage = joint_support - antecedent_support * consequent_support;
  m.conviction = confidence >= 1.0 ? std::numeric_limits<double>::infinity()
                                   : (1.0 - consequent_support) / (1.0 - confidence);
  const double denom = std::max(joint_support * (1.0 - antecedent_support),
                                antecedent_support * (consequent_support - joint_support));
  m.zhang = denom == 0.0 ? 0.0 : m.leverage / denom;
  return m;
}

MetricBundle rule_metrics(double antecedent_support, double consequent_support,
                          double joint_support) {
  check_fraction(antecedent_support, "antecedent support", false);
  return rule_metrics_with_confidence(antecedent_support, consequent_support,
                                      joint_support,
                                      std::min(1.0, joint_support / antecedent_support));
}

std::vector<AssociationRule> generate_rules(std::span<const FrequentItemset> frequent,
                                            double min_confidence) {
  if (!(min_confidence >= 0.0 && min_confidence <= 1.0)) {
    throw DomainError("min_confidence must be in [0, 1], got " +
                      csv::format_exact(min_confidence));
  }
  std::unordered_map<ItemMask, const FrequentItemset*> by_mask;
  for (const auto& f : frequent) by_mask.emplace(f.mask, &f);

  const auto lookup = [&](ItemMask mask, const FrequentItemset& parent) {
    const auto it = by_mask.find(mask);
    if (it == by_mask.end()) {
      std::string parent_items = join_items(parent.items);
      throw MissingSubsetError("frequent itemset {" + parent_items +
                               "} has a subset missing from the frequent list");
    }
    return it->second;
  };

  std::vector<const FrequentItemset*> order;
  for (const auto& f : frequent) order.push_back(&f);
  std::stable_sort(order.begin(), order.end(), [](const auto* x, const auto* y) {
    return itemset_less(x->mask, y->mask);
  });

  std::vector<AssociationRule> rules;
  for (const auto* itemset : order) {
    if (std::popcount(itemset->mask) < 2) continue;
    // Antecedents in ascending mask order.
    std::vector<ItemMask> antecedents;
    for (ItemMask a = (itemset->mask - 1) & itemset->mask; a != 0;
         a = (a - 1) & itemset->mask) {
      antecedents.push_back(a);
    }
    std::sort(antecedents.begin(), antecedents.end());
    for (const ItemMask a : antecedents) {
      const ItemMask c = itemset->mask & ~a;
      const auto* ante = lookup(a, *itemset);
      const auto* cons = lookup(c, *itemset);
      const MetricBundle m =
          rule_metrics(ante->support, cons->support, itemset->support);
      if (m.confidence < min_confidence) continue;
      rules.push_back({ante->items, cons->items, a, c, m});
    }
  }
  return rules;
}

RuleOrdering parse_rule_ordering(std::string_view text) {
  if (text == "support") return RuleOrdering::support;
  if (text == "confidence") return RuleOrdering::confidence;
  if (text == "lift") return RuleOrdering::lift;
  if (text == "zhang") return RuleOrdering::zhang;
  throw ConfigError("rule ordering must be support, confidence, lift or zhang; got '" +
                    std::string(text) + "'");
}

std::string_view to_string(RuleOrdering o) noexcept {
  switch (o) {
    case RuleOrdering::support:
      return "support";
    case RuleOrdering::confidence:
      return "confidence";
    case RuleOrdering::lift:
      return "lift";
    case RuleOrdering::zhang:
      return "zhang";
  }
  return "lift";
}

std::vector<AssociationRule> top_rules(std::vector<AssociationRule> rules, std::size_t n,
                                       RuleOrdering ordering) {
  std::stable_sort(rules.begin(), rules.end(),
                   [&](const AssociationRule& a, const AssociationRule& b) {
                     const double ma = metric_of(a, ordering);
                     const double mb = metric_of(b, ordering);
                     if (ma != mb) return ma > mb;
                     return a.antecedent < b.antecedent;
                   });
  if (rules.size() > n) rules.resize(n);
  return rules;
}

void write_rules_csv(std::span<const AssociationRule> rules, std::ostream& out,
                     int decimals) {
  std::string header;
  for (std::size_t i = 0; i < kRuleColumns.size(); ++i) {
    if (i) header += ',';
    header += kRuleColumns[i];
  }
  out << header << '\n';
  for (const auto& r : rules) {
    const auto& m = r.metrics;
    out << csv::join_row({join_items(r.antecedent), join_items(r.consequent),
                          format_metric(m.antecedent_support, decimals),
                          format_metric(m.consequent_support, decimals),
                          format_metric(m.support, decimals),
                          format_metric(m.confidence, decimals),
                          format_metric(m.lift, decimals),
                          format_metric(m.leverage, decimals),
                          format_metric(m.conviction, decimals),
                          format_metric(m.zhang, decimals)})
        << '\n';
  }
}

std::vector<AssociationRule> read_rules_csv(std::istream& in) {
  csv::Reader reader(in);
  std::vector<std::string_view> fields;
  if (!reader.next(fields) || fields.size() != kRuleColumns.size() ||
      !std::equal(fields.begin(), fields.end(), kRuleColumns.begin())) {
    throw ParseError(reader.line_number(), 0, "unexpected rule report header");
  }
  const auto number = [&](std::size_t column) {
    const auto text = fields[column];
    if (text == "infinite" || text == "inf") return std::numeric_limits<double>::infinity();
    const auto v = csv::parse_number<double>(text);
    if (!v) {
      throw ParseError(reader.line_number(), column + 1,
                       "'" + std::string(text) + "' is not a number");
    }
    return *v;
  };
  std::vector<AssociationRule> rules;
  while (reader.next(fields)) {
    if (fields.size() != kRuleColumns.size()) {
      throw ParseError(reader.line_number(), 0,
                       "expected " + std::to_string(kRuleColumns.size()) + " fields");
    }
    AssociationRule r;
    r.antecedent = split_items(fields[0]);
    r.consequent = split_items(fields[1]);
    if (r.antecedent.empty() || r.consequent.empty()) {
      throw ParseError(reader.line_number(), r.antecedent.empty() ? 1 : 2,
                       "empty itemset");
    }
    r.metrics = {number(2), number(3), number(4), number(5),
                 number(6), number(7), number(8), number(9)};
    rules.push_back(std::move(r));
  }
  return rules;
}

nlohmann::json to_json(const AssociationRule& rule) {
  const auto& m = rule.metrics;
  nlohmann::json conviction = std::isinf(m.conviction) ? nlohmann::json("infinite")
                                                       : nlohmann::json(m.conviction);
  return nlohmann::json{
      {"antecedents", rule.antecedent},
      {"consequents", rule.consequent},
      {"antecedent_support", m.antecedent_support},
      {"consequent_support", m.consequent_support},
      {"support", m.support},
      {"confidence", m.confidence},
      {"lift", m.lift},
      {"leverage", m.leverage},
      {"conviction", conviction},
      {"zhangs_metric", m.zhang},
  };
}

nlohmann::json to_json(const FrequentItemset& itemset) {
  return nlohmann::json{
      {"items", itemset.items},
      {"count", itemset.count},
      {"support", itemset.support},
  };
}

}  // namespace wumkit
