#pragma once

// Approximation for MaxEDP without congestion, driven by a low-congestion
// routing from the rounding pipeline.
//
// Paths visiting few FVS nodes are shrunk to an irreducible routing on a
// minor of G, where short paths are plentiful and a greedy pick is large.
// Paths visiting many FVS nodes concentrate flow on one FVS node, through
// which an integral routing is recovered by a max-flow argument.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "djp/graph.hpp"
#include "djp/mcf_lp.hpp"
#include "djp/rounding.hpp"

namespace djp {

struct IrreducibleState {
  /// The minor G'.
  Graph graph;
  /// Paths in G', one per input path and in the same order.
  std::vector<RoutedPath> paths;
  /// The input paths, in G.
  std::vector<RoutedPath> original;
  int congestion = 0;
  /// Node of G -> node of G'.
  std::vector<NodeId> node_map;
  /// Nodes of G' that must keep their incident edges.
  std::vector<char> protected_node;
  /// Contracted edges (ids of G) in order.
  std::vector<EdgeId> contracted;
  /// Redundant edges left alone because contracting them would delete a
  /// parallel edge that some path uses.
  std::vector<EdgeId> frozen;
};

/// Contracts redundant edges (lowest id first) that have no protected endpoint
/// until none is left. Throws Error if some edge is covered by more than `c`
/// paths.
[[nodiscard]] IrreducibleState reduce_irreducible(const Graph& g, std::span<const RoutedPath> paths, int c,
                                                  std::span<const NodeId> protected_nodes);

/// Live unprotected, unfrozen edges of G' whose covering set is contained in
/// that of another edge. Empty after reduce_irreducible.
[[nodiscard]] std::vector<EdgeId> redundant_edges(const IrreducibleState& state);

/// Mean number of edges per path of G'.
[[nodiscard]] double average_path_length(const IrreducibleState& state);

/// The original paths of `selected` (indices into state.paths). Throws Error
/// if the selection shares an edge in G'.
[[nodiscard]] Routing lift_routing(const IrreducibleState& state, std::span<const int> selected);

struct GreedySelection {
  std::vector<int> selected;
  /// Size of the shortlist (the shorter half of the paths).
  int shortlisted = 0;
  /// shortlisted / (4 r' c (c + 1))
  double guaranteed = 0.0;
  /// Every shortlisted path has length at most 4 r' (c + 1).
  bool length_hypothesis = false;
};

[[nodiscard]] GreedySelection greedy_select_short(const IrreducibleState& state, double r_prime, int c);

struct NodeRouting {
  Routing routing;
  double demand = 0.0;  // sum of path weights of the input flow
  int required = 0;     // ceil(demand / 12)
  bool used_fallback = false;
  int flow_rounds = 0;
};

/// Integral edge-disjoint routing from a fractional solution whose paths all
/// visit `v`. Throws Error when some path misses `v`.
[[nodiscard]] NodeRouting route_through_node(const Instance& inst, const FractionalSolution& frac, NodeId v);

struct EdpApproxOptions {
  RoundOptions rounding;
};

struct EdpApproxResult {
  Routing routing;
  /// "1", "2" or "both" (equal sizes); "forest" when the FVS is empty.
  std::string case_used;
  double r_prime = 1.0;
  int achieved_congestion = 0;
  int rounded_size = 0;
  int case1_paths = 0, case2_paths = 0;
  int case1_size = 0, case2_size = 0;
  NodeId case2_node = kNoNode;
  double case2_inflow = 0.0;
  double case2_total_flow = 0.0;
  bool case2_ran = false;
  NodeRouting case2;
  bool case1_ran = false;
  GreedySelection case1;
  RoundOutcome rounding;
};

/// Driver on a normalized edge-disjoint instance. Both cases run whenever
/// their path sets are non-empty and the larger routing wins.
[[nodiscard]] EdpApproxResult approx_edp(const Instance& inst, const EdpApproxOptions& options = {});

/// Number of distinct nodes of `nodes` (a sorted list) on the path.
[[nodiscard]] int count_visits(const PathSeq& p, std::span<const NodeId> nodes);

}  // namespace djp
