#include "djp/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>

namespace djp {

Graph::Graph(int node_count) {
  if (node_count < 0) throw Error("negative node count");
  adjacency_.resize(static_cast<std::size_t>(node_count));
}

NodeId Graph::add_node() {
  adjacency_.emplace_back();
  return node_count() - 1;
}

EdgeId Graph::add_edge(NodeId a, NodeId b) {
  if (!valid_node(a) || !valid_node(b)) throw Error("edge endpoint out of range");
  if (edges_.size() >= static_cast<std::size_t>(std::numeric_limits<EdgeId>::max())) throw Error("too many edges");
  const auto e = static_cast<EdgeId>(edges_.size());
  edges_.push_back({a, b});
  deleted_.push_back(0);
  adjacency_[a].push_back(e);
  if (b != a) adjacency_[b].push_back(e);
  ++live_edges_;
  return e;
}

void Graph::delete_edge(EdgeId e) {
  if (!is_live(e)) throw Error("deleting a dead edge");
  deleted_[e] = 1;
  --live_edges_;
  auto drop = [e](std::vector<EdgeId>& list) { list.erase(std::find(list.begin(), list.end(), e)); };
  drop(adjacency_[edges_[e].a]);
  if (edges_[e].b != edges_[e].a) drop(adjacency_[edges_[e].b]);
}

NodeId Graph::other(EdgeId e, NodeId v) const {
  const auto& ends = edges_.at(e);
  if (ends.a == v) return ends.b;
  if (ends.b == v) return ends.a;
  return kNoNode;
}

bool Graph::incident(EdgeId e, NodeId v) const {
  const auto& ends = edges_.at(e);
  return ends.a == v || ends.b == v;
}

std::vector<EdgeId> Graph::live_edges() const {
  std::vector<EdgeId> out;
  out.reserve(static_cast<std::size_t>(live_edges_));
  for (EdgeId e = 0; e < edge_slots(); ++e)
    if (!deleted_[e]) out.push_back(e);
  return out;
}

std::optional<EdgeId> Graph::find_edge(NodeId a, NodeId b) const {
  if (!valid_node(a) || !valid_node(b)) return std::nullopt;
  for (EdgeId e : adjacency_[a])
    if (other(e, a) == b) return e;
  return std::nullopt;
}

std::string to_string(Mode m) { return m == Mode::edge_disjoint ? "edp" : "ndp"; }

bool is_walk(const Graph& g, const PathSeq& p) {
  if (p.nodes.empty() || p.edges.size() + 1 != p.nodes.size()) return false;
  for (NodeId v : p.nodes)
    if (!g.valid_node(v)) return false;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const EdgeId e = p.edges[i];
    if (!g.is_live(e)) return false;
    if (g.other(e, p.nodes[i]) != p.nodes[i + 1]) return false;
  }
  return true;
}

bool is_simple(const PathSeq& p) {
  std::vector<NodeId> sorted = p.nodes;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

PathSeq path_from_nodes(const Graph& g, std::span<const NodeId> nodes) {
  PathSeq p;
  p.nodes.assign(nodes.begin(), nodes.end());
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    auto e = g.find_edge(nodes[i], nodes[i + 1]);
    if (!e) throw Error("nodes " + std::to_string(nodes[i]) + " and " + std::to_string(nodes[i + 1]) + " are not adjacent");
    p.edges.push_back(*e);
  }
  return p;
}

PathSeq loop_erase(const PathSeq& p) {
  PathSeq out;
  if (p.nodes.empty()) return out;
  // position of each node in `out`, rewound when a revisit closes a cycle
  std::vector<std::pair<NodeId, std::size_t>> seen;
  auto find = [&](NodeId v) {
    return std::find_if(seen.begin(), seen.end(), [v](const auto& s) { return s.first == v; });
  };
  out.nodes.push_back(p.nodes[0]);
  seen.emplace_back(p.nodes[0], 0);
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const NodeId next = p.nodes[i + 1];
    if (auto it = find(next); it != seen.end()) {
      const std::size_t pos = it->second;
      out.nodes.resize(pos + 1);
      out.edges.resize(pos);
      seen.erase(std::remove_if(seen.begin(), seen.end(), [pos](const auto& s) { return s.second > pos; }), seen.end());
    } else {
      out.edges.push_back(p.edges[i]);
      out.nodes.push_back(next);
      seen.emplace_back(next, out.nodes.size() - 1);
    }
  }
  return out;
}

PathSeq reversed(const PathSeq& p) {
  PathSeq r{std::vector<NodeId>(p.nodes.rbegin(), p.nodes.rend()), std::vector<EdgeId>(p.edges.rbegin(), p.edges.rend())};
  return r;
}

Instance normalize_instance(const Instance& raw) {
  Instance out;
  out.graph = raw.graph;
  out.mode = raw.mode;
  const int n0 = raw.graph.node_count();
  out.origin.resize(static_cast<std::size_t>(n0));
  std::iota(out.origin.begin(), out.origin.end(), 0);
  for (const auto& [s, t] : raw.pairs) {
    if (!raw.graph.valid_node(s) || !raw.graph.valid_node(t)) throw Error("terminal out of range");
    if (s == t) throw Error("terminal pair with s == t");
    TerminalPair leafs;
    leafs.s = out.graph.add_node();
    out.graph.add_edge(leafs.s, s);
    out.origin.push_back(s);
    leafs.t = out.graph.add_node();
    out.graph.add_edge(leafs.t, t);
    out.origin.push_back(t);
    out.pairs.push_back(leafs);
  }
  return out;
}

Routing denormalize_routing(const Instance& normalized, const Routing& r) {
  Routing out;
  for (const auto& entry : r.entries) {
    const auto& p = entry.path;
    if (p.nodes.size() < 3) throw Error("normalized path too short to strip leaves");
    RoutedPath q;
    q.pair = entry.pair;
    for (std::size_t i = 1; i + 1 < p.nodes.size(); ++i) {
      const NodeId v = p.nodes[i];
      q.path.nodes.push_back(normalized.origin.empty() ? v : normalized.origin.at(v));
    }
    q.path.edges.assign(p.edges.begin() + 1, p.edges.end() - 1);
    out.entries.push_back(std::move(q));
  }
  return out;
}

std::vector<int> edge_congestion(const Graph& g, std::span<const PathSeq> paths) {
  std::vector<int> load(static_cast<std::size_t>(g.edge_slots()), 0);
  std::vector<EdgeId> edges;
  for (const auto& p : paths) {
    edges = p.edges;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (EdgeId e : edges)
      if (g.valid_edge(e)) ++load[e];
  }
  return load;
}

RoutingReport verify_routing(const Instance& inst, const Routing& r, int congestion_cap) {
  RoutingReport rep;
  const Graph& g = inst.graph;
  std::vector<int> edge_load(static_cast<std::size_t>(g.edge_slots()), 0);
  std::vector<int> node_load(static_cast<std::size_t>(g.node_count()), 0);
  std::vector<char> pair_seen(inst.pairs.size(), 0);
  auto flag = [&rep](int entry, std::string msg) { rep.violations.push_back({entry, std::move(msg)}); };

  for (int i = 0; i < r.size(); ++i) {
    const auto& entry = r.entries[i];
    if (entry.pair < 0 || entry.pair >= inst.pair_count()) {
      flag(i, "pair index out of range");
      continue;
    }
    if (pair_seen[entry.pair]) flag(i, "pair routed twice");
    pair_seen[entry.pair] = 1;
    const auto& p = entry.path;
    if (!is_walk(g, p)) {
      flag(i, "path is not a walk of live edges");
      continue;
    }
    const auto& tp = inst.pairs[entry.pair];
    const bool forward = p.front() == tp.s && p.back() == tp.t;
    const bool backward = p.front() == tp.t && p.back() == tp.s;
    if (!forward && !backward) flag(i, "path does not connect its pair");
    if (!is_simple(p)) flag(i, "path is not simple");
    std::vector<EdgeId> edges = p.edges;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (EdgeId e : edges) ++edge_load[e];
    std::vector<NodeId> nodes = p.nodes;
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    for (NodeId v : nodes) ++node_load[v];
  }
  for (int c : edge_load) rep.max_edge_congestion = std::max(rep.max_edge_congestion, c);
  for (int c : node_load) rep.max_node_congestion = std::max(rep.max_node_congestion, c);
  const int relevant = inst.mode == Mode::edge_disjoint ? rep.max_edge_congestion : rep.max_node_congestion;
  if (relevant > congestion_cap)
    flag(-1, "congestion " + std::to_string(relevant) + " exceeds cap " + std::to_string(congestion_cap));
  rep.feasible = rep.violations.empty();
  return rep;
}

Contraction contract_edge(const Graph& g, EdgeId e) {
  if (!g.is_live(e)) throw Error("contracting a dead edge");
  const auto [a, b] = g.ends(e);
  if (a == b) throw Error("contracting a self-loop");
  const NodeId keep = std::min(a, b);
  const NodeId gone = std::max(a, b);

  Contraction out;
  out.node_map.resize(static_cast<std::size_t>(g.node_count()));
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const NodeId merged = v == gone ? keep : v;
    out.node_map[v] = merged > gone ? merged - 1 : merged;
  }
  out.graph = Graph(g.node_count() - 1);
  out.edge_map.assign(static_cast<std::size_t>(g.edge_slots()), kNoEdge);
  // Edge ids are preserved by re-adding every slot and tombstoning the dead ones.
  std::vector<EdgeId> to_delete;
  for (EdgeId f = 0; f < g.edge_slots(); ++f) {
    const auto ends = g.ends(f);
    const NodeId na = out.node_map[ends.a];
    const NodeId nb = out.node_map[ends.b];
    out.graph.add_edge(na, nb);
    if (!g.is_live(f) || f == e) {
      to_delete.push_back(f);
    } else if (na == nb) {
      to_delete.push_back(f);
      out.removed_loops.push_back(f);
    } else {
      out.edge_map[f] = f;
    }
  }
  for (EdgeId f : to_delete) out.graph.delete_edge(f);
  return out;
}

Components connected_components(const Graph& g, std::span<const char> removed) {
  Components c;
  c.label.assign(static_cast<std::size_t>(g.node_count()), -1);
  std::vector<NodeId> stack;
  for (NodeId root = 0; root < g.node_count(); ++root) {
    if (c.label[root] != -1 || (!removed.empty() && removed[root])) continue;
    c.label[root] = c.count;
    stack.push_back(root);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (EdgeId e : g.incident_edges(v)) {
        const NodeId w = g.other(e, v);
        if (c.label[w] != -1 || (!removed.empty() && removed[w])) continue;
        c.label[w] = c.count;
        stack.push_back(w);
      }
    }
    ++c.count;
  }
  return c;
}

bool is_forest(const Graph& g, std::span<const char> removed) {
  auto gone = [&](NodeId v) { return !removed.empty() && removed[v]; };
  int nodes = 0;
  int edges = 0;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (!gone(v)) ++nodes;
  for (EdgeId e : g.live_edges()) {
    const auto [a, b] = g.ends(e);
    if (gone(a) || gone(b)) continue;
    if (a == b) return false;
    ++edges;
  }
  const auto comps = connected_components(g, removed);
  return edges == nodes - comps.count;
}

Graph simplified(const Graph& g) {
  Graph out(g.node_count());
  std::set<std::pair<NodeId, NodeId>> seen;
  for (EdgeId e : g.live_edges()) {
    auto [a, b] = g.ends(e);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (seen.insert({a, b}).second) out.add_edge(a, b);
  }
  return out;
}

}  // namespace djp
