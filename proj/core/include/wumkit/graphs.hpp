#ifndef WUMKIT_GRAPHS_HPP_
#define WUMKIT_GRAPHS_HPP_

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "wumkit/enrichment.hpp"
#include "wumkit/model.hpp"

namespace wumkit {

inline constexpr std::string_view kSecureExitNode = "secure_exit";
inline constexpr std::string_view kDirectExitNode = "direct_exit";

enum class Normalization {
  per_source,  // out-edge weights of each node sum to 1
  global,      // every weight is count / total count
};

Normalization parse_normalization(std::string_view text);  // "source" | "global"
std::string_view to_string(Normalization n) noexcept;

struct GraphEdge {
  std::string from;
  std::string to;
  std::uint64_t count = 0;
  double weight = 0.0;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

struct NodeDegree {
  std::uint64_t in = 0;
  std::uint64_t out = 0;
  std::uint64_t total = 0;

  friend bool operator==(const NodeDegree&, const NodeDegree&) = default;
};

/// Weighted directed multigraph over service labels and, for exit graphs,
/// the two exit-method nodes. Edges are kept sorted by (from, to) and carry
/// positive counts.
class TransitionGraph {
 public:
  TransitionGraph() = default;

  /// `edges` may arrive in any order; duplicates of the same (from, to) are
  /// summed. Nodes named by edges are added automatically. Exit nodes must
  /// not have out-edges (throws DomainError).
  TransitionGraph(std::set<std::string> nodes, std::set<std::string> exit_nodes,
                  const std::vector<GraphEdge>& edges, Normalization normalization);

  const std::set<std::string>& nodes() const noexcept { return nodes_; }
  const std::set<std::string>& exit_nodes() const noexcept { return exit_nodes_; }
  const std::vector<GraphEdge>& edges() const noexcept { return edges_; }
  Normalization normalization() const noexcept { return normalization_; }
  bool has_node(std::string_view label) const;
  std::uint64_t total_count() const noexcept;

  /// Weight of from -> to, 0 when the edge is absent.
  double weight(std::string_view from, std::string_view to) const;
  std::uint64_t count(std::string_view from, std::string_view to) const;

  /// Same counts, re-weighted.
  TransitionGraph renormalized(Normalization normalization) const;

  /// Graphs compare by their edge lists (isolated nodes carry no data).
  friend bool operator==(const TransitionGraph& a, const TransitionGraph& b) {
    return a.edges_ == b.edges_;
  }

 private:
  std::set<std::string> nodes_;
  std::set<std::string> exit_nodes_;
  std::vector<GraphEdge> edges_;
  Normalization normalization_ = Normalization::per_source;
};

/// Dense count matrix over a fixed node index space. Merging is an
/// element-wise sum, so per-worker counters combine in any order.
class EdgeCounter {
 public:
  explicit EdgeCounter(std::size_t nodes) : nodes_(nodes), counts_(nodes * nodes, 0) {}
  void add(std::size_t from, std::size_t to, std::uint64_t n = 1) {
    counts_[from * nodes_ + to] += n;
  }
  void merge(const EdgeCounter& other);
  std::uint64_t count(std::size_t from, std::size_t to) const {
    return counts_[from * nodes_ + to];
  }
  std::size_t nodes() const noexcept { return nodes_; }

 private:
  std::size_t nodes_;
  std::vector<std::uint64_t> counts_;
};

/// Counts service-to-service transitions between consecutive pageviews.
/// Same-service neighbours produce no edge unless the later pageview is one
/// of the configured re-login pages, which yields a self-edge.
class TransitionCounter {
 public:
  explicit TransitionCounter(const ServiceRegistry& registry,
                             std::unordered_set<std::uint32_t> relogin_pages = {});
  void add(const SessionGroup& group);
  void merge(const TransitionCounter& other) { counter_.merge(other.counter_); }
  TransitionGraph graph(Normalization normalization = Normalization::per_source) const;

 private:
  const ServiceRegistry* registry_;
  std::unordered_set<std::uint32_t> relogin_pages_;
  EdgeCounter counter_;
};

/// One edge per session from its exit service to secure_exit (button or
/// warning window) or direct_exit.
class ExitCounter {
 public:
  explicit ExitCounter(const ServiceRegistry& registry);
  void add(const SessionExit& exit);
  void add(const SessionGroup& group) { add(determine_exit(group)); }
  void add(const EnrichedSession& s) { add(SessionExit{s.exit_srv_id, s.exit_type}); }
  void merge(const ExitCounter& other);
  TransitionGraph graph(Normalization normalization = Normalization::per_source) const;

 private:
  const ServiceRegistry* registry_;
  std::vector<std::array<std::uint64_t, 2>> counts_;  // {secure, direct}
};

TransitionGraph build_transition_graph(
    const SessionTable& table, const ServiceRegistry& registry,
    Normalization normalization = Normalization::per_source,
    const std::unordered_set<std::uint32_t>& relogin_pages = {},
    unsigned threads = 0);

TransitionGraph build_exit_graph(const SessionTable& table,
                                 const ServiceRegistry& registry,
                                 Normalization normalization = Normalization::per_source,
                                 unsigned threads = 0);

/// Throws UnknownNodeError when the node is not in the graph.
NodeDegree node_degree(const TransitionGraph& graph, std::string_view node);

enum class GraphFormat { dot, edge_list_csv, json };

/// Accepts "dot", "csv" / "edge-list-csv", "json". Throws UnknownFormatError.
GraphFormat parse_graph_format(std::string_view text);

/// Deterministic rendering with nodes and edges in lexicographic order.
std::string export_graph(const TransitionGraph& graph, GraphFormat format,
                         std::string_view name = "transitions");

/// Parses the edge-list CSV (from,to,count,weight). Nodes named
/// secure_exit or direct_exit are treated as exit nodes.
TransitionGraph parse_edge_list(std::string_view text,
                                Normalization normalization = Normalization::per_source);

}  // namespace wumkit

#endif  // WUMKIT_GRAPHS_HPP_
