#include "wumkit/report.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "wumkit/error.hpp"

#ifndef WUMKIT_VERSION_STRING
#define WUMKIT_VERSION_STRING "0.0.0"
#endif

namespace wumkit {
namespace {

void check_threshold(double value, const char* name) {
  if (!(value > 0.0 && value <= 1.0)) {
    throw ConfigError(std::string(name) + " must be in (0, 1], got " + std::to_string(value));
  }
}

nlohmann::json optional_block(bool present, const std::function<nlohmann::json()>& make) {
  return present ? make() : nlohmann::json(nullptr);
}

}  // namespace

std::string_view tool_version() noexcept { return WUMKIT_VERSION_STRING; }

void validate(const PipelineConfig& c) {
  check_threshold(c.min_support, "min_support");
  check_threshold(c.min_confidence, "min_confidence");
  check_threshold(c.significance, "significance");
}

nlohmann::json to_json(const PipelineConfig& c) {
  std::vector<std::uint32_t> relogin(c.relogin_pages.begin(), c.relogin_pages.end());
  std::sort(relogin.begin(), relogin.end());
  std::vector<std::string> attribute_items;
  for (const auto a : c.transactions.attribute_items) attribute_items.emplace_back(to_string(a));
  return {
      {"analyses",
       {{"bounce", c.analyses.bounce},
        {"chisq", c.analyses.chisq},
        {"exits", c.analyses.exits},
        {"transitions", c.analyses.transitions},
        {"rules", c.analyses.rules}}},
      {"min_support", c.min_support},
      {"min_confidence", c.min_confidence},
      {"significance", c.significance},
      {"chisq_mode", c.chisq_mode == TableMode::counts ? "counts" : "row_percentages"},
      {"yates", std::string(to_string(c.yates))},
      {"normalize", std::string(to_string(c.normalization))},
      {"seed", c.seed},
      {"top_rules", c.top_rules},
      {"rule_ordering", std::string(to_string(c.rule_ordering))},
      {"relogin_pages", relogin},
      {"attribute_items", attribute_items},
      {"age_groups",
       {c.age_groups.group1_max, c.age_groups.group2_max, c.age_groups.group3_max}},
  };
}

PipelineConfig pipeline_config_from_json(const nlohmann::json& j, PipelineConfig c) {
  if (!j.is_object()) throw ConfigError("pipeline config must be a JSON object");
  static const std::vector<std::string> known = {
      "analyses", "min_support",   "min_confidence", "significance",    "chisq_mode",
      "yates",    "normalize",     "seed",           "top_rules",       "rule_ordering",
      "relogin_pages", "attribute_items", "age_groups"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown pipeline config key '" + key + "'");
    }
  }
  try {
    if (const auto it = j.find("analyses"); it != j.end()) {
      for (const auto& [key, value] : it->items()) {
        bool* flag = key == "bounce"        ? &c.analyses.bounce
                     : key == "chisq"       ? &c.analyses.chisq
                     : key == "exits"       ? &c.analyses.exits
                     : key == "transitions" ? &c.analyses.transitions
                     : key == "rules"       ? &c.analyses.rules
                                            : nullptr;
        if (!flag) throw ConfigError("unknown analysis '" + key + "'");
        *flag = value.get<bool>();
      }
    }
    c.min_support = j.value("min_support", c.min_support);
    c.min_confidence = j.value("min_confidence", c.min_confidence);
    c.significance = j.value("significance", c.significance);
    if (j.contains("chisq_mode")) {
      const auto mode = j["chisq_mode"].get<std::string>();
      if (mode == "counts") {
        c.chisq_mode = TableMode::counts;
      } else if (mode == "row_percentages") {
        c.chisq_mode = TableMode::row_percentages;
      } else {
        throw ConfigError("chisq_mode must be counts or row_percentages, got '" + mode + "'");
      }
    }
    if (j.contains("yates")) c.yates = parse_yates_policy(j["yates"].get<std::string>());
    if (j.contains("normalize")) {
      c.normalization = parse_normalization(j["normalize"].get<std::string>());
    }
    c.seed = j.value("seed", c.seed);
    c.top_rules = j.value("top_rules", c.top_rules);
    if (j.contains("rule_ordering")) {
      c.rule_ordering = parse_rule_ordering(j["rule_ordering"].get<std::string>());
    }
    if (j.contains("relogin_pages")) {
      c.relogin_pages.clear();
      for (const auto& p : j["relogin_pages"]) c.relogin_pages.insert(p.get<std::uint32_t>());
    }
    if (j.contains("attribute_items")) {
      c.transactions.attribute_items.clear();
      for (const auto& a : j["attribute_items"]) {
        try {
          c.transactions.attribute_items.push_back(parse_attribute(a.get<std::string>()));
        } catch (const UnknownAttributeError& e) {
          throw ConfigError(e.what());
        }
      }
    }
    if (j.contains("age_groups")) {
      const auto& g = j["age_groups"];
      if (!g.is_array() || g.size() != 3) throw ConfigError("age_groups needs three bounds");
      c.age_groups = {g[0].get<std::int32_t>(), g[1].get<std::int32_t>(),
                      g[2].get<std::int32_t>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad pipeline config: ") + e.what());
  }
  validate(c);
  return c;
}

SessionAnalyzer::SessionAnalyzer(const ServiceRegistry& registry, const PipelineConfig& config)
    : registry_(registry),
      config_(config),
      exits_(registry),
      transitions_(registry, config.relogin_pages),
      encoder_(registry, config.transactions) {
  for (const auto a : kClientAttributes) contingency_.emplace_back(a);
}

void SessionAnalyzer::add(const SessionGroup& group, const EnrichedSession& session) {
  saw_groups_ = true;
  if (config_.analyses.transitions) transitions_.add(group);
  add(session);
}

void SessionAnalyzer::add(const EnrichedSession& session) {
  if (config_.analyses.bounce) bounce_.add(session);
  if (config_.analyses.chisq) {
    for (auto& c : contingency_) c.add(session);
  }
  if (config_.analyses.exits) exits_.add(session);
  if (config_.analyses.rules) encoder_.add(session);
}

AnalysisResults SessionAnalyzer::finish() const {
  AnalysisResults r;
  if (config_.analyses.bounce) r.bounce = bounce_.result();
  if (config_.analyses.chisq) {
    std::vector<ChiSquareEntry> entries;
    for (const auto& c : contingency_) {
      ChiSquareEntry e;
      e.table = c.table(config_.chisq_mode);
      try {
        e.result = chi_square(e.table, config_.yates);
      } catch (const DegenerateTableError& err) {
        e.error = err.what();
      }
      entries.push_back(std::move(e));
    }
    r.chisq = std::move(entries);
  }
  if (config_.analyses.exits) r.exits = exits_.graph(config_.normalization);
  if (config_.analyses.transitions && saw_groups_) {
    r.transitions = transitions_.graph(config_.normalization);
  }
  if (config_.analyses.rules) {
    RuleReport report;
    const auto& t = encoder_.transactions();
    report.transactions = t.size();
    report.itemsets = apriori(t, config_.min_support, config_.threads);
    report.rules = generate_rules(report.itemsets, config_.min_confidence);
    report.top = top_rules(report.rules, config_.top_rules, config_.rule_ordering);
    r.rules = std::move(report);
  }
  return r;
}

AnalysisResults analyze_table(
    const SessionTable& table, const ServiceRegistry& registry, const PipelineConfig& config,
    const std::function<void(const SessionGroup&, const EnrichedSession&)>& on_session) {
  validate(config);
  const LoginCounts logins = compute_user_login_counts(table);
  SessionAnalyzer analyzer(registry, config);
  enrich_streaming(
      table, registry, logins, config.age_groups,
      [&](const SessionGroup& g, const EnrichedSession& s) {
        analyzer.add(g, s);
        if (on_session) on_session(g, s);
      },
      config.threads);
  return analyzer.finish();
}

nlohmann::json to_json(const std::vector<ChiSquareEntry>& entries) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : entries) {
    if (e.result) {
      out.push_back(to_json(*e.result, e.table));
    } else {
      out.push_back({{"attribute", e.table.attribute},
                     {"error", e.error},
                     {"table", to_json(e.table)}});
    }
  }
  return out;
}

nlohmann::json to_json(const RuleReport& report) {
  nlohmann::json itemsets = nlohmann::json::array();
  for (const auto& f : report.itemsets) itemsets.push_back(to_json(f));
  nlohmann::json top = nlohmann::json::array();
  for (const auto& r : report.top) top.push_back(to_json(r));
  return {
      {"transactions", report.transactions},
      {"frequent_itemsets", itemsets},
      {"rule_count", report.rules.size()},
      {"top_rules", top},
  };
}

nlohmann::json graph_summary(const TransitionGraph& graph) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : graph.edges()) {
    edges.push_back({{"from", e.from}, {"to", e.to}, {"count", e.count}, {"weight", e.weight}});
  }
  nlohmann::json degrees = nlohmann::json::object();
  for (const auto& node : graph.nodes()) {
    const auto d = node_degree(graph, node);
    degrees[node] = {{"in", d.in}, {"out", d.out}, {"total", d.total}};
  }
  return {
      {"normalization", std::string(to_string(graph.normalization()))},
      {"total_count", graph.total_count()},
      {"edges", edges},
      {"degrees", degrees},
  };
}

nlohmann::json emit_summary(const AnalysisResults& r, const PipelineConfig& config) {
  return {
      {"tool", {{"name", "wumkit"}, {"version", std::string(tool_version())}}},
      {"config", to_json(config)},
      {"assumptions",
       {{"chisq_percentage_mode", config.chisq_mode == TableMode::row_percentages},
        {"yates", std::string(to_string(config.yates))},
        {"transition_counting", "pageview_pairs"},
        {"warning_window_counts_as_secure_exit", true}}},
      {"bounce", optional_block(r.bounce.has_value(), [&] { return to_json(*r.bounce); })},
      {"chisq", optional_block(r.chisq.has_value(), [&] { return to_json(*r.chisq); })},
      {"exits", optional_block(r.exits.has_value(), [&] { return graph_summary(*r.exits); })},
      {"transitions", optional_block(r.transitions.has_value(),
                                     [&] { return graph_summary(*r.transitions); })},
      {"rules", optional_block(r.rules.has_value(), [&] { return to_json(*r.rules); })},
  };
}

}  // namespace wumkit
