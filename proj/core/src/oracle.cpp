#include "djp/oracle.hpp"

#include <deque>

namespace djp {

namespace {

class Search {
 public:
  Search(const Instance& inst, std::vector<int> order)
      : g_(inst.graph), inst_(inst), order_(std::move(order)),
        edge_used_(static_cast<std::size_t>(g_.edge_slots()), 0),
        node_used_(static_cast<std::size_t>(g_.node_count()), 0),
        on_path_(static_cast<std::size_t>(g_.node_count()), 0),
        mark_(static_cast<std::size_t>(g_.node_count()), 0) {}

  // Maximisation over all pairs of `order_`.
  OracleResult maximise() {
    best_ = -1;
    branch(0, 0, /*must_route=*/false);
    OracleResult res;
    res.value = best_;
    res.witness = best_routing_;
    res.search_nodes = visited_;
    return res;
  }

  std::optional<Routing> route_all() {
    best_ = -1;
    branch(0, 0, /*must_route=*/true);
    if (best_ < 0) return std::nullopt;
    return best_routing_;
  }

 private:
  bool edp() const { return inst_.mode == Mode::edge_disjoint; }

  bool usable(EdgeId e, NodeId w) const {
    if (edp()) return !edge_used_[e];
    return !node_used_[w];
  }

  // Nodes reachable from `from` through unused resources, skipping nodes
  // flagged in on_path_ (except `from` itself).
  bool reaches(NodeId from, NodeId to) {
    ++stamp_;
    std::deque<NodeId> queue{from};
    mark_[from] = stamp_;
    while (!queue.empty()) {
      const NodeId a = queue.front();
      queue.pop_front();
      if (a == to) return true;
      for (EdgeId e : g_.incident_edges(a)) {
        const NodeId b = g_.other(e, a);
        if (mark_[b] == stamp_ || on_path_[b] || !usable(e, b)) continue;
        mark_[b] = stamp_;
        queue.push_back(b);
      }
    }
    return false;
  }

  int connected_remaining(std::size_t idx) {
    int count = 0;
    for (std::size_t j = idx; j < order_.size(); ++j) {
      const auto [s, t] = inst_.pairs[order_[j]];
      if (!edp() && (node_used_[s] || node_used_[t])) continue;
      if (reaches(s, t)) ++count;
    }
    return count;
  }

  void branch(std::size_t idx, int routed, bool must_route) {
    ++visited_;
    if (best_ == static_cast<int>(order_.size())) return;
    const int bound = routed + connected_remaining(idx);
    if (must_route ? bound < static_cast<int>(order_.size()) : bound <= best_) return;
    if (idx == order_.size()) {
      best_ = routed;
      best_routing_ = current_;
      return;
    }
    const int pair = order_[idx];
    const auto [s, t] = inst_.pairs[pair];
    if (edp() || (!node_used_[s] && !node_used_[t])) {
      path_.nodes.assign(1, s);
      path_.edges.clear();
      on_path_[s] = 1;
      if (!edp()) node_used_[s] = 1;
      extend(idx, routed, must_route, pair, s, t);
      on_path_[s] = 0;
      if (!edp()) node_used_[s] = 0;
    }
    if (!must_route) branch(idx + 1, routed, must_route);
  }

  void extend(std::size_t idx, int routed, bool must_route, int pair, NodeId at, NodeId t) {
    for (EdgeId e : g_.incident_edges(at)) {
      const NodeId w = g_.other(e, at);
      if (w == at || on_path_[w] || !usable(e, w)) continue;
      edge_used_[e] = 1;
      if (!edp()) node_used_[w] = 1;
      on_path_[w] = 1;
      path_.nodes.push_back(w);
      path_.edges.push_back(e);
      if (w == t) {
        // Path complete: release the on-path marks but keep the resources.
        const PathSeq done = path_;
        for (NodeId x : done.nodes) on_path_[x] = 0;
        current_.entries.push_back(RoutedPath{pair, done});
        branch(idx + 1, routed + 1, must_route);
        current_.entries.pop_back();
        path_ = done;
        for (NodeId x : done.nodes) on_path_[x] = 1;
      } else if (reaches(w, t)) {
        extend(idx, routed, must_route, pair, w, t);
      }
      path_.nodes.pop_back();
      path_.edges.pop_back();
      on_path_[w] = 0;
      if (!edp()) node_used_[w] = 0;
      edge_used_[e] = 0;
      if (best_ == static_cast<int>(order_.size())) return;
    }
  }

  const Graph& g_;
  const Instance& inst_;
  std::vector<int> order_;
  std::vector<char> edge_used_, node_used_, on_path_;
  std::vector<unsigned> mark_;
  unsigned stamp_ = 0;
  PathSeq path_;
  Routing current_, best_routing_;
  int best_ = -1;
  long long visited_ = 0;
};

}  // namespace

void check_oracle_guard(const Instance& inst, const OracleGuard& guard) {
  if (guard.force) return;
  const int n = core_node_count(inst);
  if (n > guard.max_nodes || inst.pair_count() > guard.max_pairs)
    throw GuardExceeded("instance with " + std::to_string(n) + " nodes and " + std::to_string(inst.pair_count()) +
                        " pairs exceeds the oracle guard (" + std::to_string(guard.max_nodes) + " nodes, " +
                        std::to_string(guard.max_pairs) + " pairs)");
}

int core_node_count(const Instance& inst) {
  std::vector<char> leaf_terminal(static_cast<std::size_t>(inst.graph.node_count()), 0);
  for (const auto& [s, t] : inst.pairs) {
    if (inst.graph.degree(s) == 1) leaf_terminal[s] = 1;
    if (inst.graph.degree(t) == 1) leaf_terminal[t] = 1;
  }
  int n = 0;
  for (char c : leaf_terminal) n += c ? 0 : 1;
  return n;
}

OracleResult exact_opt(const Instance& inst, const OracleGuard& guard) {
  check_oracle_guard(inst, guard);
  std::vector<int> order(static_cast<std::size_t>(inst.pair_count()));
  for (int i = 0; i < inst.pair_count(); ++i) order[i] = i;
  Search search(inst, std::move(order));
  return search.maximise();
}

std::optional<Routing> exact_opt_fixed_subset(const Instance& inst, std::span<const int> subset,
                                              const OracleGuard& guard) {
  check_oracle_guard(inst, guard);
  std::vector<int> order(subset.begin(), subset.end());
  for (int p : order)
    if (p < 0 || p >= inst.pair_count()) throw Error("subset names an unknown pair");
  Search search(inst, std::move(order));
  return search.route_all();
}

}  // namespace djp
