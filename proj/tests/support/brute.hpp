#pragma once

// Reference implementations used only by the tests. They share no code with
// the library beyond the Graph/Instance containers and are written for
// clarity over speed.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "djp/generators.hpp"
#include "djp/graph.hpp"

namespace djp::test {

inline Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g(n);
  for (const auto& [a, b] : edges) g.add_edge(a, b);
  return g;
}

inline Instance make_instance(int n, const std::vector<std::pair<int, int>>& edges,
                              const std::vector<std::pair<int, int>>& pairs, Mode mode = Mode::edge_disjoint) {
  Instance inst;
  inst.graph = make_graph(n, edges);
  inst.mode = mode;
  for (const auto& [s, t] : pairs) inst.pairs.push_back({s, t});
  return inst;
}

inline RoutedPath routed(const Graph& g, int pair, const std::vector<NodeId>& nodes) {
  return RoutedPath{pair, path_from_nodes(g, nodes)};
}

struct UnionFind {
  std::vector<int> up;
  explicit UnionFind(int n) : up(static_cast<std::size_t>(n)) { std::iota(up.begin(), up.end(), 0); }
  int find(int x) { return up[x] == x ? x : up[x] = find(up[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    up[a] = b;
    return true;
  }
};

// Cycle test by union-find over the live edges among kept nodes.
inline bool acyclic_without(const Graph& g, const std::vector<NodeId>& removed) {
  std::vector<char> gone(static_cast<std::size_t>(g.node_count()), 0);
  for (NodeId v : removed) gone[v] = 1;
  UnionFind uf(g.node_count());
  for (EdgeId e : g.live_edges()) {
    const auto [a, b] = g.ends(e);
    if (gone[a] || gone[b]) continue;
    if (!uf.unite(a, b)) return false;
  }
  return true;
}

// Smallest feedback vertex set size by subset enumeration.
inline int brute_fvs_size(const Graph& g) {
  const int n = g.node_count();
  for (int size = 0; size <= n; ++size) {
    std::vector<char> pick(static_cast<std::size_t>(n), 0);
    std::fill(pick.end() - size, pick.end(), 1);
    do {
      std::vector<NodeId> r;
      for (int v = 0; v < n; ++v)
        if (pick[v]) r.push_back(v);
      if (acyclic_without(g, r)) return size;
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  return n;
}

// Every simple s-t path as a list of edge ids, with node list.
struct SimplePath {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
};

inline std::vector<SimplePath> all_simple_paths(const Graph& g, NodeId s, NodeId t) {
  std::vector<SimplePath> out;
  SimplePath cur{{s}, {}};
  std::vector<char> on(static_cast<std::size_t>(g.node_count()), 0);
  on[s] = 1;
  std::function<void(NodeId)> dfs = [&](NodeId v) {
    if (v == t) {
      out.push_back(cur);
      return;
    }
    for (EdgeId e : g.live_edges()) {
      const auto [a, b] = g.ends(e);
      if (a != v && b != v) continue;
      const NodeId w = a == v ? b : a;
      if (on[w]) continue;
      on[w] = 1;
      cur.nodes.push_back(w);
      cur.edges.push_back(e);
      dfs(w);
      cur.nodes.pop_back();
      cur.edges.pop_back();
      on[w] = 0;
    }
  };
  dfs(s);
  return out;
}

// Maximum number of pairs routable disjointly, by trying every combination
// of one candidate path (or none) per pair. Pairs in `required` must be
// routed; returns -1 if that is impossible.
inline int brute_max_routing(const Instance& inst, const std::vector<int>& required = {}) {
  const int k = inst.pair_count();
  std::vector<std::vector<SimplePath>> cand(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cand[i] = all_simple_paths(inst.graph, inst.pairs[i].s, inst.pairs[i].t);
  std::vector<char> must(static_cast<std::size_t>(k), 0);
  for (int p : required) must[p] = 1;
  const bool nodes = inst.mode == Mode::node_disjoint;
  std::vector<int> used_e(static_cast<std::size_t>(inst.graph.edge_slots()), 0);
  std::vector<int> used_v(static_cast<std::size_t>(inst.graph.node_count()), 0);
  int best = -1;
  std::function<void(int, int)> go = [&](int i, int routed) {
    if (routed + (k - i) <= best) return;
    if (i == k) {
      best = routed;
      return;
    }
    for (const SimplePath& p : cand[i]) {
      bool ok = true;
      for (EdgeId e : p.edges) ok = ok && !used_e[e];
      if (nodes)
        for (NodeId v : p.nodes) ok = ok && !used_v[v];
      if (!ok) continue;
      for (EdgeId e : p.edges) used_e[e] = 1;
      if (nodes)
        for (NodeId v : p.nodes) used_v[v] = 1;
      go(i + 1, routed + 1);
      for (EdgeId e : p.edges) used_e[e] = 0;
      if (nodes)
        for (NodeId v : p.nodes) used_v[v] = 0;
    }
    if (!must[i]) go(i + 1, routed);
  };
  go(0, 0);
  return best;
}

// Independent per-edge load count.
inline std::vector<int> count_loads(const Graph& g, const Routing& r) {
  std::vector<int> load(static_cast<std::size_t>(g.edge_slots()), 0);
  for (const RoutedPath& rp : r.entries)
    for (EdgeId e : rp.path.edges) ++load[e];
  return load;
}

inline int max_load(const Graph& g, const Routing& r) {
  const auto load = count_loads(g, r);
  return load.empty() ? 0 : *std::max_element(load.begin(), load.end());
}

// Whether the input of the multicolored clique problem has a clique with one
// vertex per class.
inline bool has_multicolored_clique(const CliqueInput& in) {
  std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> adj;
  for (const auto& [a, b] : in.edges) {
    adj.insert({a, b});
    adj.insert({b, a});
  }
  std::vector<int> pick(static_cast<std::size_t>(in.k), 0);
  for (;;) {
    bool ok = true;
    for (int i = 0; i < in.k && ok; ++i)
      for (int j = i + 1; j < in.k && ok; ++j) ok = adj.count({{i, pick[i]}, {j, pick[j]}}) > 0;
    if (ok) return true;
    int pos = 0;
    while (pos < in.k && ++pick[pos] == in.n) pick[pos++] = 0;
    if (pos == in.k) return false;
  }
}

// Uniform random labelled tree on n nodes from a Pruefer sequence.
inline std::vector<std::pair<int, int>> random_tree(int n, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> edges;
  if (n < 2) return edges;
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<int> code(static_cast<std::size_t>(n - 2));
  for (int& c : code) c = pick(rng);
  std::vector<int> degree(static_cast<std::size_t>(n), 1);
  for (int c : code) ++degree[c];
  for (int c : code)
    for (int v = 0; v < n; ++v)
      if (degree[v] == 1) {
        edges.emplace_back(v, c);
        --degree[v];
        --degree[c];
        break;
      }
  int a = -1;
  for (int v = 0; v < n; ++v)
    if (degree[v] == 1) {
      if (a < 0) {
        a = v;
      } else {
        edges.emplace_back(a, v);
        break;
      }
    }
  return edges;
}

// Random multigraph-free instance: a random spanning tree plus extra random
// edges, and k pairs of distinct nodes.
inline Instance random_instance(int n, int extra, int k, std::mt19937_64& rng, Mode mode = Mode::edge_disjoint) {
  auto edges = random_tree(n, rng);
  std::set<std::pair<int, int>> have;
  for (auto [a, b] : edges) have.insert({std::min(a, b), std::max(a, b)});
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int tries = 0; extra > 0 && tries < 50 * (extra + 1); ++tries) {
    int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!have.insert({a, b}).second) continue;
    edges.emplace_back(a, b);
    --extra;
  }
  std::vector<std::pair<int, int>> pairs;
  while (static_cast<int>(pairs.size()) < k) {
    const int s = pick(rng), t = pick(rng);
    if (s != t) pairs.emplace_back(s, t);
  }
  return make_instance(n, edges, pairs, mode);
}

// Node sequence of the unique path between a and b in a tree.
inline std::vector<NodeId> tree_path(const Graph& g, NodeId a, NodeId b) {
  std::vector<NodeId> parent(static_cast<std::size_t>(g.node_count()), kNoNode);
  std::vector<NodeId> queue{a};
  parent[a] = a;
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (EdgeId e : g.incident_edges(queue[i])) {
      const NodeId w = g.other(e, queue[i]);
      if (parent[w] != kNoNode) continue;
      parent[w] = queue[i];
      queue.push_back(w);
    }
  std::vector<NodeId> path{b};
  while (path.back() != a) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace djp::test
