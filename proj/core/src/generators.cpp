#include "djp/generators.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "djp/fvs.hpp"

namespace djp {

namespace {

Instance leaf_normalized(Instance raw) {
  Instance out = normalize_instance(raw);
  out.origin.clear();
  return out;
}

void check_cubic(const SimpleGraph& h) {
  std::vector<int> deg(static_cast<std::size_t>(h.n), 0);
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : h.edges) {
    if (a < 0 || b < 0 || a >= h.n || b >= h.n || a == b) throw Error("base graph has an invalid edge");
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second) throw Error("base graph is not simple");
    ++deg[a];
    ++deg[b];
  }
  for (int d : deg)
    if (d != 3) throw Error("base graph is not cubic");
}

Generated coloring(const SimpleGraph& h, int hubs, const std::string& name) {
  check_cubic(h);
  Instance raw;
  raw.mode = Mode::edge_disjoint;
  raw.graph = Graph(hubs + h.n);
  for (int v = 0; v < h.n; ++v)
    for (int c = 0; c < hubs; ++c) raw.graph.add_edge(c, hubs + v);
  for (auto [a, b] : h.edges) raw.pairs.push_back({hubs + a, hubs + b});
  Generated g;
  g.instance = leaf_normalized(std::move(raw));
  for (int c = 0; c + 1 < hubs; ++c) g.fvs.push_back(c);
  g.name = name;
  return g;
}

}  // namespace

SimpleGraph builtin_cubic(const std::string& name) {
  SimpleGraph g;
  if (name == "k4") {
    g.n = 4;
    g.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  } else if (name == "k33") {
    g.n = 6;
    for (int a = 0; a < 3; ++a)
      for (int b = 3; b < 6; ++b) g.edges.emplace_back(a, b);
  } else if (name == "prism") {
    g.n = 6;
    g.edges = {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}, {0, 3}, {1, 4}, {2, 5}};
  } else if (name == "petersen") {
    g.n = 10;
    for (int i = 0; i < 5; ++i) {
      g.edges.emplace_back(i, (i + 1) % 5);
      g.edges.emplace_back(i, i + 5);
      g.edges.emplace_back(5 + i, 5 + (i + 2) % 5);
    }
  } else {
    throw Error("unknown built-in graph '" + name + "'");
  }
  return g;
}

std::vector<std::string> builtin_cubic_names() { return {"k4", "k33", "prism", "petersen"}; }

Generated gen_grid_gap(int k) {
  if (k < 2) throw Error("grid generator needs k >= 2");
  auto low = [k](int r, int c) { return 2 * (r * k + c); };
  auto high = [k](int r, int c) { return 2 * (r * k + c) + 1; };
  Instance inst;
  inst.mode = Mode::edge_disjoint;
  inst.graph = Graph(2 * k * k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) {
      inst.graph.add_edge(low(r, c), high(r, c));
      if (c + 1 < k) inst.graph.add_edge(high(r, c), low(r, c + 1));
      if (r + 1 < k) inst.graph.add_edge(high(r, c), low(r + 1, c));
    }
  for (int i = 0; i < k; ++i) {
    const NodeId s = inst.graph.add_node();
    inst.graph.add_edge(s, low(i, 0));
    const NodeId t = inst.graph.add_node();
    inst.graph.add_edge(t, high(k - 1, i));
    inst.pairs.push_back({s, t});
  }
  Generated g;
  g.fvs = fvs_approx2(inst.graph).nodes;
  g.instance = std::move(inst);
  g.target = 1;
  g.name = "grid-k" + std::to_string(k);
  return g;
}

Generated gen_coloring_r2(const SimpleGraph& h) {
  Generated g = coloring(h, 3, "color-r2");
  g.target = static_cast<int>(h.edges.size());
  return g;
}

Generated gen_coloring_r1(const SimpleGraph& h) {
  Generated g = coloring(h, 2, "color-r1");
  g.target = h.n;
  return g;
}

Generated gen_multicolored_clique(const CliqueInput& input) {
  const int k = input.k, n = input.n;
  if (k < 2 || n < 2) throw Error("clique generator needs k >= 2 and n >= 2");
  Instance inst;
  inst.mode = Mode::node_disjoint;
  Graph& g = inst.graph;

  // x[i][a] lists the path X_a^i in order of its second index j != i.
  std::vector<std::vector<std::vector<NodeId>>> x(k, std::vector<std::vector<NodeId>>(n));
  std::vector<std::vector<std::vector<NodeId>>> x_at(k, std::vector<std::vector<NodeId>>(n, std::vector<NodeId>(k, kNoNode)));
  for (int i = 0; i < k; ++i) {
    for (int a = 0; a < n; ++a) {
      for (int j = 0; j < k; ++j) {
        if (j == i) continue;
        const NodeId v = g.add_node();
        if (!x[i][a].empty()) g.add_edge(x[i][a].back(), v);
        x[i][a].push_back(v);
        x_at[i][a][j] = v;
      }
    }
    // The selected vertex u^i is the first vertex of the class.
    for (int a = 1; a < n; ++a) {
      const NodeId s = g.add_node();
      g.add_edge(s, x[i][a].front());
      g.add_edge(s, x[i][0].front());
      const NodeId t = g.add_node();
      g.add_edge(t, x[i][a].back());
      g.add_edge(t, x[i][0].back());
      inst.pairs.push_back({s, t});
    }
  }
  std::vector<NodeId> connectors;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const NodeId p = g.add_node();
      connectors.push_back(p);
      for (int a = 0; a < n; ++a) g.add_edge(p, x_at[i][a][j]);
      for (int b = 0; b < n; ++b) g.add_edge(p, x_at[j][b][i]);
    }
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& [u, v] : input.edges) {
    auto [i, a] = u;
    auto [j, b] = v;
    if (i < 0 || j < 0 || i >= k || j >= k || a < 0 || b < 0 || a >= n || b >= n)
      throw Error("clique input names a vertex outside the partition");
    if (i == j) throw Error("clique input has an edge inside a class");
    if (i > j) {
      std::swap(i, j);
      std::swap(a, b);
    }
    const TerminalPair pair{x_at[i][a][j], x_at[j][b][i]};
    if (seen.insert({pair.s, pair.t}).second) inst.pairs.push_back(pair);
  }

  Generated out;
  out.fvs = connectors;
  for (int i = 0; i < k; ++i) {
    out.fvs.push_back(x[i][0].front());
    out.fvs.push_back(x[i][0].back());
  }
  std::sort(out.fvs.begin(), out.fvs.end());
  out.fvs.erase(std::unique(out.fvs.begin(), out.fvs.end()), out.fvs.end());
  out.instance = std::move(inst);
  out.target = k * (n - 1) + k * (k - 1) / 2;
  out.name = "clique-k" + std::to_string(k) + "-n" + std::to_string(n);
  return out;
}

Generated gen_random_fvs(int n_forest, int r, int extra_edges, int k, std::uint64_t seed, Mode mode) {
  if (n_forest < 0 || r < 0 || extra_edges < 0 || k < 0) throw Error("random generator parameters must be nonnegative");
  const int core = n_forest + r;
  if (k > 0 && core < 2) throw Error("random generator needs at least two core nodes for pairs");
  std::mt19937_64 rng(seed);
  auto below = [&rng](int bound) { return std::uniform_int_distribution<int>(0, bound - 1)(rng); };

  Instance raw;
  raw.mode = mode;
  raw.graph = Graph(core);
  for (int v = 1; v < n_forest; ++v)
    if (below(20) < 17) raw.graph.add_edge(below(v), v);
  std::vector<std::pair<int, int>> candidates;
  for (int h = 0; h < r; ++h)
    for (int v = 0; v < n_forest; ++v) candidates.emplace_back(n_forest + h, v);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  const int extra = std::min<int>(extra_edges, static_cast<int>(candidates.size()));
  std::sort(candidates.begin(), candidates.begin() + extra);
  for (int i = 0; i < extra; ++i) raw.graph.add_edge(candidates[i].first, candidates[i].second);
  for (int i = 0; i < k; ++i) {
    const int s = below(core);
    int t = below(core - 1);
    if (t >= s) ++t;
    raw.pairs.push_back({s, t});
  }

  Generated g;
  g.instance = leaf_normalized(std::move(raw));
  for (int h = 0; h < r; ++h) g.fvs.push_back(n_forest + h);
  g.name = "random-" + std::to_string(seed);
  return g;
}

}  // namespace djp
