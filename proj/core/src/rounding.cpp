#include "djp/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>

namespace djp {

namespace {

// Interleaved node/edge sequence of p[first..last], oriented so that the
// result is the lexicographically smaller of the two directions.
std::vector<std::int64_t> segment_key(const PathSeq& p, int first, int last) {
  std::vector<std::int64_t> fwd;
  fwd.reserve(static_cast<std::size_t>(2 * (last - first) + 1));
  for (int i = first; i < last; ++i) {
    fwd.push_back(p.nodes[i]);
    fwd.push_back(p.edges[i]);
  }
  fwd.push_back(p.nodes[last]);
  std::vector<std::int64_t> bwd(fwd.rbegin(), fwd.rend());
  return std::min(fwd, bwd);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<char> hot_flags(const HotSpotState& state, int n) {
  std::vector<char> hot(static_cast<std::size_t>(n), 0);
  for (const auto& h : state.hot_spots) hot[h.node] = 1;
  return hot;
}

bool interior_has(const PathSeq& p, const Subpath& s, const std::vector<char>& flag) {
  for (int i = s.first + 1; i < s.last; ++i)
    if (flag[p.nodes[i]]) return true;
  return false;
}

}  // namespace

std::vector<NodeId> augment_fvs_with_terminals(const Instance& inst, std::span<const NodeId> fvs) {
  std::vector<NodeId> out(fvs.begin(), fvs.end());
  for (const auto& [s, t] : inst.pairs) {
    out.push_back(s);
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ForestView make_forest_view(const Graph& g, std::span<const NodeId> rplus) {
  const int n = g.node_count();
  ForestView fv;
  fv.in_rplus.assign(static_cast<std::size_t>(n), 0);
  for (NodeId v : rplus) {
    if (!g.valid_node(v)) throw Error("R+ contains an invalid node");
    fv.in_rplus[v] = 1;
  }
  if (!is_forest(g, fv.in_rplus)) throw Error("G - R+ is not a forest");
  const Components comps = connected_components(g, fv.in_rplus);
  fv.tree_of = comps.label;
  fv.root.assign(static_cast<std::size_t>(comps.count), kNoNode);
  fv.depth.assign(static_cast<std::size_t>(n), -1);
  fv.parent.assign(static_cast<std::size_t>(n), kNoNode);
  for (NodeId v = 0; v < n; ++v) {
    const int t = fv.tree_of[v];
    if (t < 0 || fv.root[t] != kNoNode) continue;
    fv.root[t] = v;
    fv.depth[v] = 0;
    std::deque<NodeId> queue{v};
    while (!queue.empty()) {
      const NodeId a = queue.front();
      queue.pop_front();
      for (EdgeId e : g.incident_edges(a)) {
        const NodeId b = g.other(e, a);
        if (fv.in_rplus[b] || fv.depth[b] >= 0) continue;
        fv.depth[b] = fv.depth[a] + 1;
        fv.parent[b] = a;
        queue.push_back(b);
      }
    }
  }
  return fv;
}

SubpathIndex build_subpath_index(const FractionalSolution& sol, const ForestView& forest) {
  SubpathIndex idx;
  idx.visits.resize(sol.paths.size());
  idx.of_path.resize(sol.paths.size());
  for (std::size_t p = 0; p < sol.paths.size(); ++p) {
    const PathSeq& path = sol.paths[p].path;
    if (path.nodes.empty()) throw Error("empty flow path");
    for (int i = 0; i < static_cast<int>(path.nodes.size()); ++i)
      if (forest.in_rplus[path.nodes[i]]) idx.visits[p].push_back(i);
    const auto& vis = idx.visits[p];
    if (vis.empty() || vis.front() != 0 || vis.back() != static_cast<int>(path.nodes.size()) - 1)
      throw Error("flow path does not start and end in R+");
    for (std::size_t j = 0; j + 1 < vis.size(); ++j) {
      Subpath s;
      s.path = static_cast<int>(p);
      s.first = vis[j];
      s.last = vis[j + 1];
      s.tree = s.last - s.first >= 2 ? forest.tree_of[path.nodes[s.first + 1]] : -1;
      idx.of_path[p].push_back(static_cast<int>(idx.subpaths.size()));
      idx.subpaths.push_back(s);
    }
  }
  return idx;
}

std::vector<NodeId> HotSpotState::hot_spot_nodes() const {
  std::vector<NodeId> out;
  for (const auto& h : hot_spots) out.push_back(h.node);
  std::sort(out.begin(), out.end());
  return out;
}

HotSpotState aggregate_flow(const Graph& g, const FractionalSolution& sol, std::span<const NodeId> rplus,
                            const AggregateOptions& options) {
  HotSpotState st;
  st.solution = sol;
  std::erase_if(st.solution.paths, [&](const WeightedPath& w) { return w.weight <= options.epsilon; });
  st.rplus.assign(rplus.begin(), rplus.end());
  st.forest = make_forest_view(g, rplus);
  const ForestView& fv = st.forest;
  std::vector<char> hot(static_cast<std::size_t>(g.node_count()), 0);
  auto& paths = st.solution.paths;

  for (int tree = 0; tree < fv.tree_count(); ++tree) {
    for (;;) {
      SubpathIndex idx = build_subpath_index(st.solution, fv);
      // Pick the hot-spot-free subpath whose highest node is deepest.
      int pick = -1;
      NodeId pick_high = kNoNode;
      std::vector<std::int64_t> pick_key;
      for (int s = 0; s < static_cast<int>(idx.subpaths.size()); ++s) {
        const Subpath& sp = idx.subpaths[s];
        if (sp.tree != tree) continue;
        const PathSeq& p = paths[sp.path].path;
        if (interior_has(p, sp, hot)) continue;
        NodeId high = p.nodes[sp.first + 1];
        for (int i = sp.first + 1; i < sp.last; ++i)
          if (fv.depth[p.nodes[i]] < fv.depth[high]) high = p.nodes[i];
        auto key = segment_key(p, sp.first, sp.last);
        if (pick < 0 || fv.depth[high] > fv.depth[pick_high] ||
            (fv.depth[high] == fv.depth[pick_high] && key < pick_key)) {
          pick = s;
          pick_high = high;
          pick_key = std::move(key);
        }
      }
      if (pick < 0) break;

      const Subpath chosen = idx.subpaths[pick];
      const PathSeq pivot_path = paths[chosen.path].path;
      NodeId u = pivot_path.nodes[chosen.first];
      NodeId v = pivot_path.nodes[chosen.last];
      if (u > v) std::swap(u, v);
      // The pivot oriented from u to v.
      PathSeq pivot;
      pivot.nodes.assign(pivot_path.nodes.begin() + chosen.first, pivot_path.nodes.begin() + chosen.last + 1);
      pivot.edges.assign(pivot_path.edges.begin() + chosen.first, pivot_path.edges.begin() + chosen.last);
      if (pivot.front() != u) pivot = reversed(pivot);

      auto class_weight = [&](const SubpathIndex& ix) {
        double w = 0.0;
        for (const Subpath& sp : ix.subpaths)
          if (sp.tree == tree && segment_key(paths[sp.path].path, sp.first, sp.last) == pick_key)
            w += paths[sp.path].weight;
        return w;
      };
      double fj = class_weight(idx);
      if (fj > 1.0 + options.class_tolerance)
        throw Error("identical subpaths carry weight " + std::to_string(fj) + " > 1");

      while (fj < 1.0 - options.epsilon) {
        int donor_sub = -1;
        for (int s = 0; s < static_cast<int>(idx.subpaths.size()); ++s) {
          const Subpath& sp = idx.subpaths[s];
          const PathSeq& p = paths[sp.path].path;
          NodeId a = p.nodes[sp.first], b = p.nodes[sp.last];
          if (a > b) std::swap(a, b);
          if (a != u || b != v) continue;
          if (interior_has(p, sp, hot)) continue;
          if (sp.tree == tree && segment_key(p, sp.first, sp.last) == pick_key) continue;
          donor_sub = s;
          break;  // subpaths are listed by path index, then position
        }
        if (donor_sub < 0) break;
        const Subpath ds = idx.subpaths[donor_sub];
        const WeightedPath donor = paths[ds.path];
        const PathSeq leg = donor.path.nodes[ds.first] == u ? pivot : reversed(pivot);
        WeightedPath created;
        created.pair = donor.pair;
        created.path.nodes.assign(donor.path.nodes.begin(), donor.path.nodes.begin() + ds.first);
        created.path.edges.assign(donor.path.edges.begin(), donor.path.edges.begin() + ds.first);
        created.path.nodes.insert(created.path.nodes.end(), leg.nodes.begin(), leg.nodes.end());
        created.path.edges.insert(created.path.edges.end(), leg.edges.begin(), leg.edges.end());
        created.path.nodes.insert(created.path.nodes.end(), donor.path.nodes.begin() + ds.last + 1, donor.path.nodes.end());
        created.path.edges.insert(created.path.edges.end(), donor.path.edges.begin() + ds.last, donor.path.edges.end());
        const double w = std::min(donor.weight, 1.0 - fj);
        created.weight = w;
        const double left = donor.weight - w;

        RerouteRecord rec;
        rec.donor = ds.path;
        rec.pair = donor.pair;
        rec.u = u;
        rec.v = v;
        rec.weight = w;
        rec.donor_weight_left = left <= options.epsilon ? 0.0 : left;
        paths.push_back(std::move(created));
        if (left <= options.epsilon) {
          paths.erase(paths.begin() + ds.path);
        } else {
          paths[ds.path].weight = left;
        }
        rec.created = static_cast<int>(paths.size()) - 1;
        st.reroutes.push_back(rec);
        fj += w;
        idx = build_subpath_index(st.solution, fv);
      }

      hot[pick_high] = 1;
      st.hot_spots.push_back(HotSpotRecord{pick_high, u, v, tree, fj});
    }
  }
  return st;
}

std::vector<int> uncovered_subpaths(const HotSpotState& state) {
  const SubpathIndex idx = build_subpath_index(state.solution, state.forest);
  const auto hot = hot_flags(state, static_cast<int>(state.forest.tree_of.size()));
  std::vector<int> out;
  for (int s = 0; s < static_cast<int>(idx.subpaths.size()); ++s) {
    const Subpath& sp = idx.subpaths[s];
    if (sp.tree >= 0 && !interior_has(state.solution.paths[sp.path].path, sp, hot)) out.push_back(s);
  }
  return out;
}

std::vector<double> fractional_congestion(const Graph& g, const FractionalSolution& sol) {
  std::vector<double> load(static_cast<std::size_t>(g.edge_slots()), 0.0);
  for (const auto& wp : sol.paths)
    for (EdgeId e : wp.path.edges) load[e] += wp.weight;
  return load;
}

std::vector<NodeId> extend_hotspots_for_analysis(const Graph& g, const HotSpotState& state) {
  const ForestView& fv = state.forest;
  const int n = g.node_count();
  const auto hot = hot_flags(state, n);
  std::vector<int> below(static_cast<std::size_t>(n), 0);  // hot spots in the subtree
  std::vector<int> total(static_cast<std::size_t>(fv.tree_count()), 0);
  std::vector<NodeId> order;
  for (NodeId v = 0; v < n; ++v) {
    if (fv.tree_of[v] < 0) continue;
    order.push_back(v);
    if (hot[v]) ++total[fv.tree_of[v]];
  }
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return fv.depth[a] > fv.depth[b]; });
  for (NodeId v : order) {
    below[v] += hot[v];
    if (fv.parent[v] != kNoNode) below[fv.parent[v]] += below[v];
  }
  // Edge (v, parent) lies between two hot spots iff it splits them.
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (NodeId v : order) {
    if (fv.parent[v] == kNoNode) continue;
    if (below[v] > 0 && below[v] < total[fv.tree_of[v]]) {
      ++deg[v];
      ++deg[fv.parent[v]];
    }
  }
  std::vector<NodeId> out;
  for (NodeId v = 0; v < n; ++v)
    if (hot[v] || deg[v] >= 3 || fv.in_rplus[v]) out.push_back(v);
  return out;
}

int congestion_bound(int k, int r, double c_const) {
  const double kappa = std::max(static_cast<double>(k) * std::max(r, 1), 4.0);
  const double lk = std::log(kappa);
  const double value = c_const * lk / std::log(std::max(std::numbers::e, lk));
  return std::max(2, static_cast<int>(std::ceil(value)));
}

RoundedRouting randomized_round(const Graph& g, const HotSpotState& state, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& sol = state.solution;
  const int k = static_cast<int>(sol.marginals.size());
  std::vector<std::vector<int>> by_pair(static_cast<std::size_t>(k));
  for (int p = 0; p < static_cast<int>(sol.paths.size()); ++p) by_pair[sol.paths[p].pair].push_back(p);

  RoundedRouting out;
  out.raw_edge_congestion.assign(static_cast<std::size_t>(g.edge_slots()), 0);
  for (int i = 0; i < k; ++i) {
    if (!(uniform01(rng) < sol.marginals[i]) || by_pair[i].empty()) continue;
    double total = 0.0;
    for (int p : by_pair[i]) total += sol.paths[p].weight;
    const double target = uniform01(rng) * total;
    int chosen = by_pair[i].back();
    double acc = 0.0;
    for (int p : by_pair[i]) {
      acc += sol.paths[p].weight;
      if (target < acc) {
        chosen = p;
        break;
      }
    }
    const PathSeq& raw = sol.paths[chosen].path;
    out.raw_paths.push_back(raw);
    for (EdgeId e : raw.edges) ++out.raw_edge_congestion[e];
    out.routing.entries.push_back(RoutedPath{i, loop_erase(raw)});
  }
  for (int c : out.raw_edge_congestion) out.raw_congestion = std::max(out.raw_congestion, c);
  std::vector<PathSeq> emitted;
  for (const auto& rp : out.routing.entries) emitted.push_back(rp.path);
  for (int c : edge_congestion(g, emitted)) out.congestion = std::max(out.congestion, c);
  return out;
}

std::optional<bool> hot_spot_congestion_holds(const Graph& g, std::span<const NodeId> hot,
                                              std::span<const int> edge_load, int bound) {
  for (NodeId h : hot)
    for (EdgeId e : g.incident_edges(h))
      if (edge_load[e] > bound) return std::nullopt;
  for (EdgeId e : g.live_edges())
    if (edge_load[e] > 2 * bound) return false;
  return true;
}

RoundOutcome round_with_retries(const Instance& inst, const RoundOptions& options) {
  if (inst.mode != Mode::edge_disjoint) throw Error("rounding expects an edge-disjoint instance");
  const Graph& g = inst.graph;
  RoundOutcome out;
  out.fvs = fvs_auto(g, options.fvs_exact_limit);
  const auto rplus = augment_fvs_with_terminals(inst, out.fvs.nodes);
  const ArcFlow flow = solve_lp(inst, options.lp);
  const FractionalSolution frac = decompose_paths(g, flow);
  out.lp_objective = frac.objective;
  out.state = aggregate_flow(g, frac, rplus);
  out.bound = congestion_bound(inst.pair_count(), out.fvs.size(), options.c_const);
  out.congestion_cap = 2 * out.bound;
  out.required = static_cast<int>(std::ceil(out.lp_objective / 2.0 - 1e-6));

  auto better = [&](const RoundedRouting& a, const RoundedRouting& b) {
    const bool ca = a.congestion <= out.congestion_cap, cb = b.congestion <= out.congestion_cap;
    if (ca != cb) return ca;
    if (a.routing.size() != b.routing.size()) return a.routing.size() > b.routing.size();
    return a.congestion < b.congestion;
  };
  for (int t = 0; t < options.max_trials; ++t) {
    RoundedRouting trial = randomized_round(g, out.state, options.seed + static_cast<std::uint64_t>(t));
    out.trials_used = t + 1;
    const bool ok = trial.routing.size() >= out.required && trial.congestion <= out.congestion_cap;
    if (t == 0 || ok || better(trial, out.best)) out.best = std::move(trial);
    if (ok) {
      out.success = true;
      out.successful_trial = t;
      break;
    }
  }
  return out;
}

}  // namespace djp
