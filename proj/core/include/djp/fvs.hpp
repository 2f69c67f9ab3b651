#pragma once

#include <optional>
#include <vector>

#include "djp/graph.hpp"

namespace djp {

struct FeedbackVertexSet {
  std::vector<NodeId> nodes;  // sorted
  bool is_exact = false;

  [[nodiscard]] int size() const noexcept { return static_cast<int>(nodes.size()); }
};

/// True iff deleting `nodes` from `g` leaves a forest.
[[nodiscard]] bool is_feedback_vertex_set(const Graph& g, std::span<const NodeId> nodes);

/// Minimum feedback vertex set, or nullopt when the minimum exceeds `budget`.
/// Branch-and-reduce: degree <= 1 deletion, degree-2 bypass, forced self-loop
/// nodes, then branching over the nodes of a shortest cycle. Iterative
/// deepening on the budget makes the first hit minimum.
[[nodiscard]] std::optional<FeedbackVertexSet> fvs_exact(const Graph& g, int budget);

/// Factor-2 approximation by local ratio over semidisjoint cycles followed by
/// reverse deletion.
[[nodiscard]] FeedbackVertexSet fvs_approx2(const Graph& g);

/// Exact when the minimum is at most `exact_limit`, the 2-approximation otherwise.
[[nodiscard]] FeedbackVertexSet fvs_auto(const Graph& g, int exact_limit = 12);

}  // namespace djp
