#pragma once

// Exhaustive MaxEDP / MaxNDP solvers for small instances.

#include <span>

#include "djp/graph.hpp"

namespace djp {

struct OracleGuard {
  /// Limits on the instance size; terminal leaves do not count as nodes.
  int max_nodes = 14;
  int max_pairs = 6;
  bool force = false;
};

class GuardExceeded : public Error {
 public:
  using Error::Error;
};

struct OracleResult {
  int value = 0;
  Routing witness;
  long long search_nodes = 0;
};

/// Nodes other than degree-1 terminals; the quantity the node guard limits.
[[nodiscard]] int core_node_count(const Instance& inst);

/// Throws GuardExceeded when `inst` is beyond the guard. Normalizing an
/// instance whose terminals are already leaves turns those leaves into inner
/// nodes, so callers holding the raw instance should check it instead.
void check_oracle_guard(const Instance& inst, const OracleGuard& guard);

/// Maximum number of pairs routable by pairwise edge-disjoint (node-disjoint)
/// simple paths. Branch and bound over pairs: each pair is either skipped or
/// routed along one of its simple paths in the residual graph, and a branch
/// is cut once even routing every still-connected remaining pair cannot beat
/// the incumbent. Throws GuardExceeded for instances beyond the guard.
[[nodiscard]] OracleResult exact_opt(const Instance& inst, const OracleGuard& guard = {});

/// Routes exactly the pairs in `subset` if possible.
[[nodiscard]] std::optional<Routing> exact_opt_fixed_subset(const Instance& inst, std::span<const int> subset,
                                                            const OracleGuard& guard = {});

}  // namespace djp
