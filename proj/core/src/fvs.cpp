#include "djp/fvs.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace djp {

namespace {

// Mutable multigraph used by the reductions. Node ids stay those of the input.
struct WorkGraph {
  std::vector<std::map<NodeId, int>> adj;
  std::vector<int> loops;
  std::vector<char> alive;

  explicit WorkGraph(const Graph& g)
      : adj(static_cast<std::size_t>(g.node_count())),
        loops(static_cast<std::size_t>(g.node_count()), 0),
        alive(static_cast<std::size_t>(g.node_count()), 1) {
    for (EdgeId e : g.live_edges()) {
      const auto [a, b] = g.ends(e);
      add_edge(a, b);
    }
  }

  void add_edge(NodeId a, NodeId b) {
    if (a == b) {
      ++loops[a];
    } else {
      ++adj[a][b];
      ++adj[b][a];
    }
  }

  [[nodiscard]] int degree(NodeId v) const {
    int d = 2 * loops[v];
    for (const auto& [w, m] : adj[v]) d += m;
    return d;
  }

  void remove(NodeId v) {
    for (const auto& [w, m] : adj[v]) adj[w].erase(v);
    adj[v].clear();
    loops[v] = 0;
    alive[v] = 0;
  }

  [[nodiscard]] bool empty() const { return std::none_of(alive.begin(), alive.end(), [](char a) { return a; }); }

  void strip_low_degree() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (NodeId v = 0; v < static_cast<NodeId>(alive.size()); ++v) {
        if (alive[v] && degree(v) <= 1) {
          remove(v);
          changed = true;
        }
      }
    }
  }
};

// Applies the reduction rules; nodes forced into the solution are appended to
// `sol`. Returns false if more than `budget` nodes are forced.
bool reduce(WorkGraph& g, int& budget, std::vector<NodeId>& sol) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId v = 0; v < static_cast<NodeId>(g.alive.size()); ++v) {
      if (!g.alive[v]) continue;
      if (g.loops[v] > 0) {
        if (budget == 0) return false;
        sol.push_back(v);
        --budget;
        g.remove(v);
        changed = true;
        continue;
      }
      const int d = g.degree(v);
      if (d <= 1) {
        g.remove(v);
        changed = true;
      } else if (d == 2) {
        // Every cycle through v also passes its neighbours, so v can be bypassed.
        const NodeId a = g.adj[v].begin()->first;
        const NodeId b = g.adj[v].size() == 1 ? a : std::next(g.adj[v].begin())->first;
        g.remove(v);
        g.add_edge(a, b);
        changed = true;
      }
    }
  }
  return true;
}

// Nodes of a shortest cycle (any closed walk of minimum length is a cycle).
std::vector<NodeId> shortest_cycle(const WorkGraph& g) {
  const auto n = static_cast<NodeId>(g.alive.size());
  for (NodeId v = 0; v < n; ++v) {
    if (!g.alive[v]) continue;
    if (g.loops[v] > 0) return {v};
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!g.alive[v]) continue;
    for (const auto& [w, m] : g.adj[v])
      if (m >= 2) return {v, w};
  }
  std::vector<NodeId> best;
  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<NodeId> parent(static_cast<std::size_t>(n));
  for (NodeId root = 0; root < n; ++root) {
    if (!g.alive[root]) continue;
    std::fill(dist.begin(), dist.end(), -1);
    dist[root] = 0;
    parent[root] = kNoNode;
    std::deque<NodeId> queue{root};
    bool done = false;
    while (!queue.empty() && !done) {
      const NodeId u = queue.front();
      queue.pop_front();
      if (!best.empty() && 2 * dist[u] + 1 >= static_cast<int>(best.size())) break;
      for (const auto& [w, m] : g.adj[u]) {
        if (w == parent[u]) continue;
        if (dist[w] == -1) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          queue.push_back(w);
        } else {
          const int len = dist[u] + dist[w] + 1;
          if (best.empty() || len < static_cast<int>(best.size())) {
            std::vector<NodeId> cyc;
            for (NodeId x = u; x != kNoNode; x = parent[x]) cyc.push_back(x);
            for (NodeId x = w; x != kNoNode; x = parent[x]) cyc.push_back(x);
            std::sort(cyc.begin(), cyc.end());
            cyc.erase(std::unique(cyc.begin(), cyc.end()), cyc.end());
            best = std::move(cyc);
          }
          done = true;
        }
      }
    }
  }
  return best;
}

bool search(WorkGraph g, int budget, std::vector<NodeId>& sol) {
  if (!reduce(g, budget, sol)) return false;
  if (g.empty()) return true;
  if (budget == 0) return false;
  for (NodeId v : shortest_cycle(g)) {
    WorkGraph branch = g;
    branch.remove(v);
    std::vector<NodeId> attempt = sol;
    attempt.push_back(v);
    if (search(std::move(branch), budget - 1, attempt)) {
      sol = std::move(attempt);
      return true;
    }
  }
  return false;
}

// A cycle in which every node but at most one has degree 2, if any.
std::optional<std::vector<NodeId>> semidisjoint_cycle(const WorkGraph& g) {
  const auto n = static_cast<NodeId>(g.alive.size());
  for (NodeId v = 0; v < n; ++v)
    if (g.alive[v] && g.loops[v] > 0) return std::vector<NodeId>{v};
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (NodeId v = 0; v < n; ++v) {
    if (!g.alive[v] || seen[v] || g.degree(v) != 2) continue;
    std::vector<NodeId> comp;
    std::vector<NodeId> stack{v};
    seen[v] = 1;
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (const auto& [w, m] : g.adj[u]) {
        if (!seen[w] && g.degree(w) == 2) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    std::vector<NodeId> exits;
    for (NodeId u : comp)
      for (const auto& [w, m] : g.adj[u])
        if (g.degree(w) != 2)
          for (int i = 0; i < m; ++i) exits.push_back(w);
    if (exits.empty()) {
      std::sort(comp.begin(), comp.end());
      return comp;
    }
    if (exits.size() == 2 && exits[0] == exits[1]) {
      comp.push_back(exits[0]);
      std::sort(comp.begin(), comp.end());
      return comp;
    }
  }
  return std::nullopt;
}

}  // namespace

bool is_feedback_vertex_set(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<char> removed(static_cast<std::size_t>(g.node_count()), 0);
  for (NodeId v : nodes) {
    if (!g.valid_node(v)) return false;
    removed[v] = 1;
  }
  return is_forest(g, removed);
}

std::optional<FeedbackVertexSet> fvs_exact(const Graph& g, int budget) {
  if (budget < 0) throw Error("negative fvs budget");
  const WorkGraph base(g);
  for (int b = 0; b <= budget; ++b) {
    std::vector<NodeId> sol;
    if (search(base, b, sol)) {
      std::sort(sol.begin(), sol.end());
      return FeedbackVertexSet{std::move(sol), true};
    }
  }
  return std::nullopt;
}

FeedbackVertexSet fvs_approx2(const Graph& g) {
  constexpr double kEps = 1e-9;
  WorkGraph work(g);
  std::vector<double> weight(static_cast<std::size_t>(g.node_count()), 1.0);
  std::vector<NodeId> picked;
  const auto n = static_cast<NodeId>(g.node_count());
  for (;;) {
    work.strip_low_degree();
    if (work.empty()) break;
    if (auto cycle = semidisjoint_cycle(work)) {
      double gamma = weight[cycle->front()];
      for (NodeId v : *cycle) gamma = std::min(gamma, weight[v]);
      for (NodeId v : *cycle) weight[v] -= gamma;
    } else {
      double gamma = std::numeric_limits<double>::infinity();
      for (NodeId v = 0; v < n; ++v)
        if (work.alive[v]) gamma = std::min(gamma, weight[v] / (work.degree(v) - 1));
      for (NodeId v = 0; v < n; ++v)
        if (work.alive[v]) weight[v] -= gamma * (work.degree(v) - 1);
    }
    for (NodeId v = 0; v < n; ++v) {
      if (work.alive[v] && weight[v] <= kEps) {
        picked.push_back(v);
        work.remove(v);
      }
    }
  }
  std::vector<NodeId> result = picked;
  for (auto it = picked.rbegin(); it != picked.rend(); ++it) {
    std::vector<NodeId> without;
    for (NodeId v : result)
      if (v != *it) without.push_back(v);
    if (is_feedback_vertex_set(g, without)) result = std::move(without);
  }
  std::sort(result.begin(), result.end());
  return FeedbackVertexSet{std::move(result), false};
}

FeedbackVertexSet fvs_auto(const Graph& g, int exact_limit) {
  if (auto exact = fvs_exact(g, exact_limit)) return *exact;
  return fvs_approx2(g);
}

}  // namespace djp
