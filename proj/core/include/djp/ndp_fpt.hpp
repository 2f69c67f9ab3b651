#pragma once

// Exact MaxNDP parameterized by the feedback vertex set number.
//
// A solution is described by the pairs whose paths visit R, each with the
// ordered chain of R nodes it visits. The consecutive elements of a chain
// (terminal, R node, ..., R node, terminal) are the essential pairs, each of
// which must be realized by a path whose interior lies in the forest
// F = G - R. A tree DP over F then decides realizability of the essential
// pairs while routing as many of the remaining pairs inside F as possible.

#include <functional>
#include <optional>
#include <vector>

#include "djp/graph.hpp"

namespace djp {

struct Chain {
  int pair = -1;
  std::vector<NodeId> r_nodes;  // visited R nodes in order, at least one
  friend bool operator==(const Chain&, const Chain&) = default;
};

struct EssentialStructure {
  std::vector<Chain> chains;  // ordered by pair index
  friend bool operator==(const EssentialStructure&, const EssentialStructure&) = default;
};

/// Essential pairs (a, b) of a structure, in chain order.
[[nodiscard]] std::vector<std::pair<NodeId, NodeId>> essential_pairs(const Instance& inst, const EssentialStructure& s);

/// Streams every structure over `r` R nodes and `k` pairs: each pair is either
/// off R or gets a chain of distinct R nodes, chains pairwise disjoint. The
/// empty structure comes first. The callback returns false to stop early.
/// Returns the number of structures produced.
long long enumerate_essential_structures(int k, std::span<const NodeId> r_nodes,
                                         const std::function<bool(const EssentialStructure&)>& visit);

/// The graph the DP runs on: simple, every edge at an R node subdivided, and a
/// dummy root adjacent to the smallest node of every tree of F.
struct PreparedNdp {
  Instance source;  // the normalized input
  Graph graph;      // simple + subdivisions; the dummy root has no edges
  std::vector<NodeId> r_nodes;
  std::vector<char> is_r;
  /// Prepared node -> source node, kNoNode for subdivision nodes and the root.
  std::vector<NodeId> origin;
  NodeId root = kNoNode;
  std::vector<NodeId> parent;                 // in the rooted forest, root's children point at root
  std::vector<std::vector<NodeId>> children;  // ordered by id
  std::vector<int> tree_of;                   // component of F, -1 for R and the root
  std::vector<NodeId> post_order;             // children before parents, root last
};

/// Throws Error if `r_nodes` contains a terminal or is not a feedback vertex set.
[[nodiscard]] PreparedNdp preprocess_ndp(const Instance& inst, std::span<const NodeId> r_nodes);

/// Max number of off-R pairs routed inside F alongside a realization of the
/// structure's essential pairs; nullopt when the structure is unrealizable.
[[nodiscard]] std::optional<int> dp_solve(const PreparedNdp& prep, const EssentialStructure& s);

/// Recomputes the DP and checks blocked >= free >= to-be-used at every entry.
[[nodiscard]] bool dp_tables_monotone(const PreparedNdp& prep, const EssentialStructure& s);

struct NdpOptions {
  int jobs = 1;
  int fvs_exact_limit = 12;
};

struct NdpResult {
  int value = 0;
  Routing routing;  // on the normalized input
  EssentialStructure structure;
  /// Complete structures whose DP was evaluated.
  long long structures_tried = 0;
  /// DP evaluations including partial structures used for pruning.
  long long dp_runs = 0;
  std::vector<NodeId> r_nodes;
};

/// Optimum on a normalized node-disjoint instance. The structure space is
/// searched depth-first over the pairs; partial structures are bounded by the
/// DP so that hopeless branches are skipped.
[[nodiscard]] NdpResult maxndp_fpt(const Instance& inst, const NdpOptions& options = {});

}  // namespace djp
