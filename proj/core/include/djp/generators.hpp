#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "djp/graph.hpp"

namespace djp {

struct Generated {
  Instance instance;
  /// A feedback vertex set of the instance graph.
  std::vector<NodeId> fvs;
  /// Number of pairs the construction is about (all pairs, |V(H)|, or l).
  std::optional<int> target;
  std::string name;
};

/// Plain simple graph given by an edge list.
struct SimpleGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

/// Named cubic graphs: "k4", "k33", "prism", "petersen".
[[nodiscard]] SimpleGraph builtin_cubic(const std::string& name);
[[nodiscard]] std::vector<std::string> builtin_cubic_names();

/// Every grid node is split into a lower-left and an upper-right half joined
/// by an edge, so all degrees are at most 3 and two edge-disjoint paths can
/// touch but never cross. s_i hangs off the left end of row i, t_i off the
/// top end of column i, and pair i's canonical path runs along row i and then
/// up column i.
[[nodiscard]] Generated gen_grid_gap(int k);

/// K_{3,|V(H)|}, hubs are nodes 0..2, one pair per edge of H. Leaf-normalized.
[[nodiscard]] Generated gen_coloring_r2(const SimpleGraph& h);
/// Same with two hubs (nodes 0 and 1); target |V(H)|.
[[nodiscard]] Generated gen_coloring_r1(const SimpleGraph& h);

/// Input of the multicolored clique problem: vertex (i, a) is the a-th vertex
/// of class i, classes padded to n vertices each.
struct CliqueInput {
  int k = 2;
  int n = 2;
  std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> edges;
};

/// Node-disjoint instance with target l = k(n-1) + C(k,2); the first vertex of
/// each class is the selected u^i. Terminals are not leaves.
[[nodiscard]] Generated gen_multicolored_clique(const CliqueInput& input);

/// Random forest on `n_forest` nodes plus `r` hubs (the last r core nodes)
/// with `extra_edges` distinct random hub-forest edges and `k` random pairs
/// of distinct core nodes. Leaf-normalized; the hubs are the FVS witness.
[[nodiscard]] Generated gen_random_fvs(int n_forest, int r, int extra_edges, int k, std::uint64_t seed,
                                       Mode mode = Mode::edge_disjoint);

}  // namespace djp
