#pragma once

// Undirected multigraphs with stable edge ids, routing instances and the
// feasibility checker shared by every solver in the library.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace djp {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;

inline constexpr NodeId kNoNode = -1;
inline constexpr EdgeId kNoEdge = -1;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EdgeEnds {
  NodeId a = kNoNode;
  NodeId b = kNoNode;
  friend bool operator==(const EdgeEnds&, const EdgeEnds&) = default;
};

/// Undirected multigraph. Edge ids are positions in the edge list and are
/// never reused; deleting an edge leaves a tombstone.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int node_count);

  NodeId add_node();
  EdgeId add_edge(NodeId a, NodeId b);
  void delete_edge(EdgeId e);

  [[nodiscard]] int node_count() const noexcept { return static_cast<int>(adjacency_.size()); }
  /// Number of edge ids ever issued, live or deleted.
  [[nodiscard]] int edge_slots() const noexcept { return static_cast<int>(edges_.size()); }
  [[nodiscard]] int live_edge_count() const noexcept { return live_edges_; }

  [[nodiscard]] bool valid_node(NodeId v) const noexcept { return v >= 0 && v < node_count(); }
  [[nodiscard]] bool valid_edge(EdgeId e) const noexcept { return e >= 0 && e < edge_slots(); }
  [[nodiscard]] bool is_live(EdgeId e) const noexcept { return valid_edge(e) && !deleted_[e]; }

  [[nodiscard]] EdgeEnds ends(EdgeId e) const { return edges_.at(e); }
  /// The endpoint of `e` opposite to `v`; kNoNode if `v` is not an endpoint.
  [[nodiscard]] NodeId other(EdgeId e, NodeId v) const;
  [[nodiscard]] bool incident(EdgeId e, NodeId v) const;

  /// Live edges incident to `v` in increasing id order. A self-loop appears once.
  [[nodiscard]] std::span<const EdgeId> incident_edges(NodeId v) const { return adjacency_.at(v); }
  [[nodiscard]] int degree(NodeId v) const { return static_cast<int>(adjacency_.at(v).size()); }

  /// Live edge ids in increasing order.
  [[nodiscard]] std::vector<EdgeId> live_edges() const;
  /// Lowest-id live edge joining a and b, if any.
  [[nodiscard]] std::optional<EdgeId> find_edge(NodeId a, NodeId b) const;

 private:
  std::vector<EdgeEnds> edges_;
  std::vector<char> deleted_;
  std::vector<std::vector<EdgeId>> adjacency_;
  int live_edges_ = 0;
};

enum class Mode { edge_disjoint, node_disjoint };

[[nodiscard]] std::string to_string(Mode m);

struct TerminalPair {
  NodeId s = kNoNode;
  NodeId t = kNoNode;
  friend bool operator==(const TerminalPair&, const TerminalPair&) = default;
};

struct Instance {
  Graph graph;
  std::vector<TerminalPair> pairs;
  Mode mode = Mode::edge_disjoint;
  /// origin[v] is the node of the instance this one was derived from; empty
  /// for raw instances, filled by normalize_instance.
  std::vector<NodeId> origin;

  [[nodiscard]] int pair_count() const noexcept { return static_cast<int>(pairs.size()); }
};

/// A walk given by its node sequence and the edges between consecutive nodes.
/// Explicit edge ids disambiguate parallel edges.
struct PathSeq {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;

  [[nodiscard]] int length() const noexcept { return static_cast<int>(edges.size()); }
  [[nodiscard]] bool empty() const noexcept { return nodes.empty(); }
  [[nodiscard]] NodeId front() const { return nodes.front(); }
  [[nodiscard]] NodeId back() const { return nodes.back(); }
  friend bool operator==(const PathSeq&, const PathSeq&) = default;
};

struct RoutedPath {
  int pair = -1;
  PathSeq path;
};

struct Routing {
  std::vector<RoutedPath> entries;
  [[nodiscard]] int size() const noexcept { return static_cast<int>(entries.size()); }
};

/// True iff consecutive nodes are joined by the listed live edges.
[[nodiscard]] bool is_walk(const Graph& g, const PathSeq& p);
/// True iff no node repeats.
[[nodiscard]] bool is_simple(const PathSeq& p);
/// Builds a PathSeq from a node sequence, picking the lowest-id live edge
/// between consecutive nodes. Throws Error if two consecutive nodes are not
/// adjacent.
[[nodiscard]] PathSeq path_from_nodes(const Graph& g, std::span<const NodeId> nodes);
/// Removes cycles from a walk (keeps the first visit of each node), which only
/// ever drops edges.
[[nodiscard]] PathSeq loop_erase(const PathSeq& p);
[[nodiscard]] PathSeq reversed(const PathSeq& p);

/// Copies every terminal occurrence into a fresh leaf attached to the original
/// node so the pairs form a matching on degree-1 nodes. Existing node ids are
/// kept; leaves are appended as s then t for each pair in order.
[[nodiscard]] Instance normalize_instance(const Instance& raw);

/// Maps a routing on a normalized instance back to the instance it came from
/// by dropping the leaf endpoints of every path.
[[nodiscard]] Routing denormalize_routing(const Instance& normalized, const Routing& r);

struct Violation {
  int entry = -1;
  std::string message;
};

struct RoutingReport {
  bool feasible = false;
  int max_edge_congestion = 0;
  int max_node_congestion = 0;
  std::vector<Violation> violations;
};

/// Checks a routing. Malformed entries are reported as violations; this never
/// throws on bad routings. A path may list its pair in either direction.
/// Node congestion counts endpoints.
[[nodiscard]] RoutingReport verify_routing(const Instance& inst, const Routing& r, int congestion_cap);

/// Per-edge-slot count of paths using the edge (each path counted once per edge).
[[nodiscard]] std::vector<int> edge_congestion(const Graph& g, std::span<const PathSeq> paths);

struct Contraction {
  Graph graph;
  /// old node id -> new node id
  std::vector<NodeId> node_map;
  /// old edge id -> same id if it survived, kNoEdge if contracted or deleted as a loop
  std::vector<EdgeId> edge_map;
  /// Edges that became self-loops and were deleted.
  std::vector<EdgeId> removed_loops;
};

/// Merges the endpoints of `e`. The surviving node takes the smaller id slot
/// after compaction; other edge ids are preserved; loops created by the merge
/// are deleted.
[[nodiscard]] Contraction contract_edge(const Graph& g, EdgeId e);

/// Connected-component label per node (labels 0..count-1 in order of smallest member).
struct Components {
  std::vector<int> label;
  int count = 0;
};
[[nodiscard]] Components connected_components(const Graph& g, std::span<const char> removed = {});

/// True iff the graph restricted to nodes not in `removed` (a per-node flag
/// vector, may be empty) has no cycle. Parallel edges and loops count as cycles.
[[nodiscard]] bool is_forest(const Graph& g, std::span<const char> removed = {});

/// Simple copy of `g`: parallel edges collapsed and loops dropped.
[[nodiscard]] Graph simplified(const Graph& g);

}  // namespace djp
