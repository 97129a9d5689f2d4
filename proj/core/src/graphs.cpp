#include "wumkit/graphs.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "wumkit/csv.hpp"
#include "wumkit/error.hpp"
#include "wumkit/parallel.hpp"

namespace wumkit {
namespace {

bool is_exit_label(std::string_view label) {
  return label == kSecureExitNode || label == kDirectExitNode;
}

std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::set<std::string> service_labels(const ServiceRegistry& registry) {
  std::set<std::string> labels;
  for (const auto& s : registry.entries()) labels.insert(s.name);
  return labels;
}

// Per-chunk counters merged under a lock; merge is a plain sum, so the
// result does not depend on which chunk finishes first.
template <typename Counter, typename Make>
Counter count_parallel(const SessionTable& table, unsigned threads, Make make) {
  Counter total = make();
  std::mutex mutex;
  parallel_for(table.size(), threads, [&](std::size_t begin, std::size_t end) {
    Counter local = make();
    for (std::size_t i = begin; i < end; ++i) local.add(table[i]);
    std::lock_guard lock(mutex);
    total.merge(local);
  });
  return total;
}

}  // namespace

Normalization parse_normalization(std::string_view text) {
  if (text == "source" || text == "per_source" || text == "per-source") {
    return Normalization::per_source;
  }
  if (text == "global") return Normalization::global;
  throw ConfigError("normalization must be source or global; got '" +
                    std::string(text) + "'");
}

std::string_view to_string(Normalization n) noexcept {
  return n == Normalization::global ? "global" : "source";
}

TransitionGraph::TransitionGraph(std::set<std::string> nodes,
                                 std::set<std::string> exit_nodes,
                                 const std::vector<GraphEdge>& edges,
                                 Normalization normalization)
    : nodes_(std::move(nodes)),
      exit_nodes_(std::move(exit_nodes)),
      normalization_(normalization) {
  std::map<std::pair<std::string, std::string>, std::uint64_t> merged;
  for (const auto& e : edges) {
    if (e.count == 0) continue;
    if (exit_nodes_.count(e.from)) {
      throw DomainError("exit node '" + e.from + "' cannot have out-edges");
    }
    merged[{e.from, e.to}] += e.count;
  }
  for (const auto& label : exit_nodes_) nodes_.insert(label);

  std::map<std::string, std::uint64_t> out_totals;
  std::uint64_t total = 0;
  for (const auto& [key, count] : merged) {
    nodes_.insert(key.first);
    nodes_.insert(key.second);
    out_totals[key.first] += count;
    total += count;
  }
  edges_.reserve(merged.size());
  for (const auto& [key, count] : merged) {
    const double denom = normalization_ == Normalization::per_source
                             ? double(out_totals[key.first])
                             : double(total);
    edges_.push_back({key.first, key.second, count, double(count) / denom});
  }
}

bool TransitionGraph::has_node(std::string_view label) const {
  return nodes_.find(std::string(label)) != nodes_.end();
}

std::uint64_t TransitionGraph::total_count() const noexcept {
  std::uint64_t total = 0;
  for (const auto& e : edges_) total += e.count;
  return total;
}

double TransitionGraph::weight(std::string_view from, std::string_view to) const {
  for (const auto& e : edges_) {
    if (e.from == from && e.to == to) return e.weight;
  }
  return 0.0;
}

std::uint64_t TransitionGraph::count(std::string_view from, std::string_view to) const {
  for (const auto& e : edges_) {
    if (e.from == from && e.to == to) return e.count;
  }
  return 0;
}

TransitionGraph TransitionGraph::renormalized(Normalization normalization) const {
  return TransitionGraph(nodes_, exit_nodes_, edges_, normalization);
}

void EdgeCounter::merge(const EdgeCounter& other) {
  if (other.nodes_ != nodes_) {
    throw DomainError("cannot merge edge counters of different sizes");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

TransitionCounter::TransitionCounter(const ServiceRegistry& registry,
                                     std::unordered_set<std::uint32_t> relogin_pages)
    : registry_(&registry),
      relogin_pages_(std::move(relogin_pages)),
      counter_(registry.size()) {}

void TransitionCounter::add(const SessionGroup& group) {
  const auto& events = group.events;
  for (std::size_t i = 1; i < events.size(); ++i) {
    const auto& prev = events[i - 1];
    const auto& cur = events[i];
    if (prev.service_id == cur.service_id && !relogin_pages_.count(cur.page_id)) {
      continue;
    }
    counter_.add(registry_->position(prev.service_id),
                 registry_->position(cur.service_id));
  }
}

TransitionGraph TransitionCounter::graph(Normalization normalization) const {
  std::vector<GraphEdge> edges;
  const std::size_t n = registry_->size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (const auto c = counter_.count(i, j)) {
        edges.push_back({registry_->name_at(i), registry_->name_at(j), c, 0.0});
      }
    }
  }
  return TransitionGraph(service_labels(*registry_), {}, edges, normalization);
}

ExitCounter::ExitCounter(const ServiceRegistry& registry)
    : registry_(&registry), counts_(registry.size(), {0, 0}) {}

void ExitCounter::add(const SessionExit& exit) {
  ++counts_[registry_->position(exit.service)]
           [is_regular_termination(exit.method) ? 0 : 1];
}

void ExitCounter::merge(const ExitCounter& other) {
  if (other.counts_.size() != counts_.size()) {
    throw DomainError("cannot merge exit counters of different sizes");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    counts_[i][0] += other.counts_[i][0];
    counts_[i][1] += other.counts_[i][1];
  }
}

TransitionGraph ExitCounter::graph(Normalization normalization) const {
  std::vector<GraphEdge> edges;
  for (std::size_t i = 0; i < registry_->size(); ++i) {
    if (const auto c = counts_[i][0]) {
      edges.push_back({registry_->name_at(i), std::string(kSecureExitNode), c, 0.0});
    }
    if (const auto c = counts_[i][1]) {
      edges.push_back({registry_->name_at(i), std::string(kDirectExitNode), c, 0.0});
    }
  }
  return TransitionGraph(service_labels(*registry_),
                         {std::string(kSecureExitNode), std::string(kDirectExitNode)},
                         edges, normalization);
}

TransitionGraph build_transition_graph(const SessionTable& table,
                                       const ServiceRegistry& registry,
                                       Normalization normalization,
                                       const std::unordered_set<std::uint32_t>& relogin_pages,
                                       unsigned threads) {
  const auto counter = count_parallel<TransitionCounter>(
      table, threads, [&] { return TransitionCounter(registry, relogin_pages); });
  return counter.graph(normalization);
}

TransitionGraph build_exit_graph(const SessionTable& table,
                                 const ServiceRegistry& registry,
                                 Normalization normalization, unsigned threads) {
  const auto counter =
      count_parallel<ExitCounter>(table, threads, [&] { return ExitCounter(registry); });
  return counter.graph(normalization);
}

NodeDegree node_degree(const TransitionGraph& graph, std::string_view node) {
  if (!graph.has_node(node)) throw UnknownNodeError(std::string(node));
  NodeDegree d;
  for (const auto& e : graph.edges()) {
    if (e.from == node) d.out += e.count;
    if (e.to == node) d.in += e.count;
  }
  d.total = d.in + d.out;
  return d;
}

GraphFormat parse_graph_format(std::string_view text) {
  if (text == "dot") return GraphFormat::dot;
  if (text == "csv" || text == "edge-list-csv") return GraphFormat::edge_list_csv;
  if (text == "json") return GraphFormat::json;
  throw UnknownFormatError(std::string(text));
}

std::string export_graph(const TransitionGraph& graph, GraphFormat format,
                         std::string_view name) {
  std::string out;
  switch (format) {
    case GraphFormat::dot: {
      out += "digraph " + dot_quote(name) + " {\n";
      for (const auto& node : graph.nodes()) {
        out += "  " + dot_quote(node);
        if (graph.exit_nodes().count(node)) out += " [shape=box]";
        out += ";\n";
      }
      for (const auto& e : graph.edges()) {
        out += "  " + dot_quote(e.from) + " -> " + dot_quote(e.to) +
               " [weight=" + csv::format_exact(e.weight) + ", label=\"" +
               std::to_string(e.count) + "\"];\n";
      }
      out += "}\n";
      break;
    }
    case GraphFormat::edge_list_csv: {
      out += "from,to,count,weight\n";
      for (const auto& e : graph.edges()) {
        out += csv::join_row({e.from, e.to, std::to_string(e.count),
                              csv::format_exact(e.weight)});
        out += '\n';
      }
      break;
    }
    case GraphFormat::json: {
      nlohmann::json edges = nlohmann::json::array();
      for (const auto& e : graph.edges()) {
        edges.push_back(
            {{"from", e.from}, {"to", e.to}, {"count", e.count}, {"weight", e.weight}});
      }
      const nlohmann::json doc{
          {"name", std::string(name)},
          {"normalization", std::string(to_string(graph.normalization()))},
          {"nodes", graph.nodes()},
          {"exit_nodes", graph.exit_nodes()},
          {"edges", edges},
      };
      out = doc.dump(2);
      out += '\n';
      break;
    }
  }
  return out;
}

TransitionGraph parse_edge_list(std::string_view text, Normalization normalization) {
  std::istringstream in{std::string(text)};
  csv::Reader reader(in);
  std::vector<std::string_view> fields;
  if (!reader.next(fields) || fields.size() != 4 || fields[0] != "from" ||
      fields[1] != "to" || fields[2] != "count" || fields[3] != "weight") {
    throw ParseError(reader.line_number(), 0,
                     "expected header from,to,count,weight");
  }
  std::vector<GraphEdge> edges;
  std::set<std::string> exit_nodes;
  while (reader.next(fields)) {
    if (fields.size() != 4) {
      throw ParseError(reader.line_number(), 0, "expected 4 fields");
    }
    const auto count = csv::parse_number<std::uint64_t>(fields[2]);
    if (!count || *count == 0) {
      throw ParseError(reader.line_number(), 3, "count must be a positive integer");
    }
    if (!csv::parse_number<double>(fields[3])) {
      throw ParseError(reader.line_number(), 4, "weight is not a number");
    }
    GraphEdge e{std::string(fields[0]), std::string(fields[1]), *count, 0.0};
    if (is_exit_label(e.to)) exit_nodes.insert(e.to);
    edges.push_back(std::move(e));
  }
  return TransitionGraph({}, std::move(exit_nodes), edges, normalization);
}

}  // namespace wumkit
