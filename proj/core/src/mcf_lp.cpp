#include "djp/mcf_lp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace djp {

namespace {

struct Network {
  int nodes = 0;
  std::vector<FlowArc> arcs;
  std::vector<int> group;  // capacity group per arc, -1 if none
  int groups = 0;
  std::vector<NodeId> graph_node;
};

Network build_network(const Graph& g, Mode mode) {
  Network net;
  const int n = g.node_count();
  if (mode == Mode::edge_disjoint) {
    net.nodes = n;
    for (NodeId v = 0; v < n; ++v) net.graph_node.push_back(v);
    for (EdgeId e : g.live_edges()) {
      const auto [a, b] = g.ends(e);
      if (a == b) continue;
      net.arcs.push_back({a, b, e});
      net.arcs.push_back({b, a, e});
      net.group.push_back(net.groups);
      net.group.push_back(net.groups);
      ++net.groups;
    }
  } else {
    net.nodes = 2 * n;
    for (NodeId v = 0; v < n; ++v) {
      net.graph_node.push_back(v);
      net.graph_node.push_back(v);
    }
    for (NodeId v = 0; v < n; ++v) {
      net.arcs.push_back({2 * v, 2 * v + 1, kNoEdge});
      net.group.push_back(net.groups++);
    }
    for (EdgeId e : g.live_edges()) {
      const auto [a, b] = g.ends(e);
      if (a == b) continue;
      net.arcs.push_back({2 * a + 1, 2 * b, e});
      net.arcs.push_back({2 * b + 1, 2 * a, e});
      net.group.push_back(-1);
      net.group.push_back(-1);
    }
  }
  return net;
}

}  // namespace

ArcFlow solve_lp(const Instance& inst, const LpOptions& options) {
  const Graph& g = inst.graph;
  const Network net = build_network(g, inst.mode);
  const int k = inst.pair_count();
  const int arcs = static_cast<int>(net.arcs.size());

  ArcFlow out;
  out.mode = inst.mode;
  out.network_nodes = net.nodes;
  out.arcs = net.arcs;
  out.graph_node = net.graph_node;
  for (const auto& [s, t] : inst.pairs) {
    if (!g.valid_node(s) || !g.valid_node(t) || s == t) throw Error("invalid terminal pair");
    out.source.push_back(inst.mode == Mode::edge_disjoint ? s : 2 * s);
    out.sink.push_back(inst.mode == Mode::edge_disjoint ? t : 2 * t + 1);
  }

  LinearProgram lp;
  std::vector<std::vector<int>> var(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(arcs), -1));
  std::vector<int> xvar(static_cast<std::size_t>(k));
  std::vector<std::vector<std::pair<int, double>>> capacity(static_cast<std::size_t>(net.groups));
  for (int i = 0; i < k; ++i) {
    xvar[i] = lp.add_variable(1.0, 1.0);
    // Node rows: out - in - x[source] + x[sink] = 0.
    std::vector<std::vector<std::pair<int, double>>> rows(static_cast<std::size_t>(net.nodes));
    for (int a = 0; a < arcs; ++a) {
      const auto& arc = net.arcs[a];
      if (arc.head == out.source[i] || arc.tail == out.sink[i]) continue;
      const int v = lp.add_variable(0.0, 1.0);
      var[i][a] = v;
      rows[arc.tail].push_back({v, 1.0});
      rows[arc.head].push_back({v, -1.0});
      if (net.group[a] >= 0) capacity[net.group[a]].push_back({v, 1.0});
    }
    rows[out.source[i]].push_back({xvar[i], -1.0});
    rows[out.sink[i]].push_back({xvar[i], 1.0});
    for (auto& row : rows)
      if (!row.empty()) lp.add_row(LinearProgram::RowKind::equal_zero, std::move(row), 0.0);
  }
  for (auto& row : capacity)
    if (!row.empty()) lp.add_row(LinearProgram::RowKind::less_equal, std::move(row), 1.0);

  const SimplexResult res = solve_simplex(lp, options.simplex);
  out.status = res.status;
  out.iterations = res.iterations;
  out.flow.assign(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(arcs), 0.0));
  out.marginals.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    for (int a = 0; a < arcs; ++a) {
      if (var[i][a] < 0) continue;
      const double f = res.values[var[i][a]];
      out.flow[i][a] = f < options.snap ? 0.0 : f;
    }
    const double x = res.values[xvar[i]];
    out.marginals[i] = x < options.snap ? 0.0 : x;
    out.objective += out.marginals[i];
  }
  return out;
}

FractionalSolution decompose_paths(const Graph& g, const ArcFlow& flow, double tolerance) {
  FractionalSolution sol;
  sol.marginals = flow.marginals;
  sol.objective = flow.objective;
  const int arcs = static_cast<int>(flow.arcs.size());
  std::vector<std::vector<int>> out_arcs(static_cast<std::size_t>(flow.network_nodes));
  for (int a = 0; a < arcs; ++a) out_arcs[flow.arcs[a].tail].push_back(a);

  for (int i = 0; i < static_cast<int>(flow.marginals.size()); ++i) {
    std::vector<double> residual = flow.flow[i];
    std::vector<double> net(static_cast<std::size_t>(flow.network_nodes), 0.0);
    for (int a = 0; a < arcs; ++a) {
      net[flow.arcs[a].tail] += residual[a];
      net[flow.arcs[a].head] -= residual[a];
    }
    const double x = flow.marginals[i];
    for (int v = 0; v < flow.network_nodes; ++v) {
      double expect = 0.0;
      if (v == flow.source[i]) expect += x;
      if (v == flow.sink[i]) expect -= x;
      if (std::abs(net[v] - expect) > tolerance * std::max<std::size_t>(1, out_arcs[v].size() + 1))
        throw Error("flow of pair " + std::to_string(i) + " violates conservation at network node " + std::to_string(v));
    }

    double remaining = x;
    while (remaining > tolerance) {
      // widest path by a Dijkstra-style sweep on bottleneck capacity
      std::vector<double> width(static_cast<std::size_t>(flow.network_nodes), -1.0);
      std::vector<int> via(static_cast<std::size_t>(flow.network_nodes), -1);
      using Item = std::pair<double, int>;
      auto worse = [](const Item& a, const Item& b) { return a.first < b.first || (a.first == b.first && a.second > b.second); };
      std::priority_queue<Item, std::vector<Item>, decltype(worse)> heap(worse);
      width[flow.source[i]] = std::numeric_limits<double>::infinity();
      heap.push({width[flow.source[i]], flow.source[i]});
      std::vector<char> done(static_cast<std::size_t>(flow.network_nodes), 0);
      while (!heap.empty()) {
        const auto [w, v] = heap.top();
        heap.pop();
        if (done[v]) continue;
        done[v] = 1;
        if (v == flow.sink[i]) break;
        for (int a : out_arcs[v]) {
          if (residual[a] <= tolerance) continue;
          const int h = flow.arcs[a].head;
          const double cand = std::min(w, residual[a]);
          if (!done[h] && cand > width[h]) {
            width[h] = cand;
            via[h] = a;
            heap.push({cand, h});
          }
        }
      }
      if (via[flow.sink[i]] < 0) break;
      std::vector<int> chain;
      for (int v = flow.sink[i]; v != flow.source[i]; v = flow.arcs[via[v]].tail) chain.push_back(via[v]);
      std::reverse(chain.begin(), chain.end());
      const double w = std::min(width[flow.sink[i]], remaining);
      for (int a : chain) residual[a] -= w;
      remaining -= w;

      WeightedPath wp;
      wp.pair = i;
      wp.weight = w;
      wp.path.nodes.push_back(flow.graph_node[flow.source[i]]);
      for (int a : chain) {
        if (flow.arcs[a].edge == kNoEdge) continue;
        wp.path.edges.push_back(flow.arcs[a].edge);
        wp.path.nodes.push_back(flow.graph_node[flow.arcs[a].head]);
      }
      if (!is_walk(g, wp.path)) throw Error("decomposed path is not a walk");
      sol.paths.push_back(std::move(wp));
    }
  }
  return sol;
}

double lp_value(const Instance& inst, const LpOptions& options) { return solve_lp(inst, options).objective; }

std::vector<double> edge_loads(const Graph& g, const FractionalSolution& sol) {
  std::vector<double> load(static_cast<std::size_t>(g.edge_slots()), 0.0);
  for (const auto& wp : sol.paths) {
    std::vector<EdgeId> edges = wp.path.edges;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (EdgeId e : edges) load[e] += wp.weight;
  }
  return load;
}

std::vector<double> pair_weights(const FractionalSolution& sol, int pair_count) {
  std::vector<double> w(static_cast<std::size_t>(pair_count), 0.0);
  for (const auto& wp : sol.paths) w[wp.pair] += wp.weight;
  return w;
}

}  // namespace djp
