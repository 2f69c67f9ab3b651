#pragma once

// Bi-criteria rounding for MaxEDP on graphs with a small feedback vertex set.
//
// Pipeline: FVS -> add terminals (R+) -> LP -> path decomposition -> split
// every flow path at its R+ visits into subpaths -> aggregate flow so each
// subpath carries a hot spot -> independent randomized rounding per pair.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "djp/fvs.hpp"
#include "djp/graph.hpp"
#include "djp/mcf_lp.hpp"

namespace djp {

/// R together with every terminal node, sorted and deduplicated.
[[nodiscard]] std::vector<NodeId> augment_fvs_with_terminals(const Instance& inst, std::span<const NodeId> fvs);

/// Rooted view of the forest F = G - R+. Trees are numbered by their smallest
/// node, which is also the root.
struct ForestView {
  std::vector<char> in_rplus;
  std::vector<int> tree_of;  // -1 for R+ nodes
  std::vector<NodeId> root;  // per tree
  std::vector<int> depth;    // distance to the root, -1 for R+ nodes
  std::vector<NodeId> parent;

  [[nodiscard]] int tree_count() const noexcept { return static_cast<int>(root.size()); }
};

/// Throws Error if G - R+ has a cycle.
[[nodiscard]] ForestView make_forest_view(const Graph& g, std::span<const NodeId> rplus);

/// Segment of path `path` between two consecutive R+ visits; `first` and
/// `last` are positions in the path's node list.
struct Subpath {
  int path = -1;
  int first = 0;
  int last = 0;
  /// Tree of F containing the interior, or -1 when the interior is empty.
  int tree = -1;
};

struct SubpathIndex {
  std::vector<Subpath> subpaths;
  /// Per path: positions of its R+ visits in order.
  std::vector<std::vector<int>> visits;
  /// Per path: ids of its subpaths in order.
  std::vector<std::vector<int>> of_path;
};

/// A path visiting l nodes of R+ yields l - 1 subpaths. Paths must start and
/// end in R+.
[[nodiscard]] SubpathIndex build_subpath_index(const FractionalSolution& sol, const ForestView& forest);

struct RerouteRecord {
  int donor = -1;    // path index before the operation
  int created = -1;  // index of the new path right after the operation
  int pair = -1;
  NodeId u = kNoNode, v = kNoNode;
  double weight = 0.0;
  double donor_weight_left = 0.0;
};

struct HotSpotRecord {
  NodeId node = kNoNode;
  /// Endpoints of the subpath that defined the hot spot (u < v).
  NodeId u = kNoNode, v = kNoNode;
  int tree = -1;
  /// Weight of the identical-subpath class when the hot spot was added.
  double class_weight = 0.0;
};

struct HotSpotState {
  FractionalSolution solution;
  std::vector<NodeId> rplus;
  ForestView forest;
  /// Hot spots in the order they were added.
  std::vector<HotSpotRecord> hot_spots;
  std::vector<RerouteRecord> reroutes;

  [[nodiscard]] std::vector<NodeId> hot_spot_nodes() const;
};

struct AggregateOptions {
  double epsilon = 1e-9;
  /// Identical-subpath classes heavier than 1 + class_tolerance abort.
  double class_tolerance = 1e-6;
};

/// Flow aggregation onto hot spots. Marginals are untouched; paths whose weight
/// drops to zero are removed.
[[nodiscard]] HotSpotState aggregate_flow(const Graph& g, const FractionalSolution& sol,
                                          std::span<const NodeId> rplus, const AggregateOptions& options = {});

/// Subpaths of the current solution that have a non-empty interior but no hot
/// spot in it. Empty after a completed aggregation.
[[nodiscard]] std::vector<int> uncovered_subpaths(const HotSpotState& state);

/// Per-edge fractional load, counting an edge once per traversal.
[[nodiscard]] std::vector<double> fractional_congestion(const Graph& g, const FractionalSolution& sol);

/// Hot spots plus the branching nodes of the subforest that connects them
/// within each tree, plus R+. Sorted.
[[nodiscard]] std::vector<NodeId> extend_hotspots_for_analysis(const Graph& g, const HotSpotState& state);

/// max(2, ceil(c * ln K / ln(max(e, ln K)))) with K = max(k * max(r, 1), 4).
[[nodiscard]] int congestion_bound(int k, int r, double c_const);

struct RoundedRouting {
  /// Loop-erased sampled paths, valid as a routing.
  Routing routing;
  /// Sampled paths exactly as stored in the fractional solution.
  std::vector<PathSeq> raw_paths;
  std::vector<int> raw_edge_congestion;  // per edge slot
  int raw_congestion = 0;
  int congestion = 0;  // of `routing`
};

/// Routes pair i with probability x_i, then picks one of its paths with
/// probability proportional to its weight.
[[nodiscard]] RoundedRouting randomized_round(const Graph& g, const HotSpotState& state, std::uint64_t seed);

/// Checks the structural congestion lemma on a sample: when every edge at a
/// node of `hot` has load at most `bound`, every edge must have load at most
/// 2 * bound. Returns nullopt if some hot spot is bad, else whether it holds.
[[nodiscard]] std::optional<bool> hot_spot_congestion_holds(const Graph& g, std::span<const NodeId> hot,
                                                            std::span<const int> edge_load, int bound);

struct RoundOptions {
  double c_const = 2.0;
  int max_trials = 20;
  std::uint64_t seed = 1;
  int fvs_exact_limit = 12;
  LpOptions lp;
};

struct RoundOutcome {
  bool success = false;
  /// First successful trial, or the best trial on failure.
  RoundedRouting best;
  int trials_used = 0;
  int successful_trial = -1;
  int bound = 0;           // congestion_bound(k, r, c)
  int congestion_cap = 0;  // 2 * bound
  int required = 0;        // ceil(sum x / 2)
  double lp_objective = 0.0;
  FeedbackVertexSet fvs;
  HotSpotState state;
};

/// Full pipeline on a normalized edge-disjoint instance; trial t uses seed + t.
[[nodiscard]] RoundOutcome round_with_retries(const Instance& inst, const RoundOptions& options = {});

}  // namespace djp
