#pragma once

// Multi-commodity flow relaxation of MaxEDP in its compact arc form, and the
// flow decomposition into weighted paths.
//
// The path relaxation (one variable per s_i-t_i path) and the arc relaxation
// (one variable per pair and directed arc) have equal optima by flow
// decomposition; the arc form is what gets solved. For node-disjoint
// instances nodes are split into in/out copies joined by a unit arc.

#include <span>
#include <vector>

#include "djp/graph.hpp"
#include "djp/simplex.hpp"

namespace djp {

struct LpOptions {
  SimplexOptions simplex;
  /// Arc values below this are treated as zero before decomposition.
  double snap = 1e-7;
};

/// Directed arc of the flow network. `edge` is the graph edge it traverses or
/// kNoEdge for the internal arc of a split node.
struct FlowArc {
  int tail = 0;
  int head = 0;
  EdgeId edge = kNoEdge;
};

struct ArcFlow {
  Mode mode = Mode::edge_disjoint;
  int network_nodes = 0;
  std::vector<FlowArc> arcs;
  /// network node -> graph node
  std::vector<NodeId> graph_node;
  std::vector<int> source, sink;  // per pair, network coordinates
  /// flow[i][a]: flow of pair i on arc a
  std::vector<std::vector<double>> flow;
  std::vector<double> marginals;
  double objective = 0.0;
  SimplexStatus status = SimplexStatus::optimal;
  int iterations = 0;
};

struct WeightedPath {
  int pair = -1;
  PathSeq path;
  double weight = 0.0;
};

struct FractionalSolution {
  std::vector<double> marginals;
  std::vector<WeightedPath> paths;
  double objective = 0.0;
  /// Per-edge load bound the solution satisfies (1 for an LP solution).
  double congestion_limit = 1.0;
};

/// Optimal basic solution of: max sum x_i s.t. per-pair conservation,
/// x_i <= 1 and unit capacity per edge (per node in node-disjoint mode).
/// An iteration-limit stop is reported through `status` with the last
/// feasible point.
[[nodiscard]] ArcFlow solve_lp(const Instance& inst, const LpOptions& options = {});

/// Per pair: repeatedly extract a widest source-sink path from the support,
/// subtract it, and drop whatever circulation remains. Throws Error when a
/// pair's flow violates conservation by more than `tolerance`.
[[nodiscard]] FractionalSolution decompose_paths(const Graph& g, const ArcFlow& flow, double tolerance = 1e-7);

/// Objective of solve_lp.
[[nodiscard]] double lp_value(const Instance& inst, const LpOptions& options = {});

/// Total path weight on each edge slot.
[[nodiscard]] std::vector<double> edge_loads(const Graph& g, const FractionalSolution& sol);
/// Sum of path weights per pair.
[[nodiscard]] std::vector<double> pair_weights(const FractionalSolution& sol, int pair_count);

}  // namespace djp
