#include "djp/edp_approx.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

#include "djp/oracle.hpp"
#include "maxflow.hpp"

namespace djp {

namespace {

using Bits = std::vector<std::uint64_t>;

std::vector<Bits> coverage(const Graph& g, const std::vector<RoutedPath>& paths) {
  const std::size_t words = (paths.size() + 63) / 64;
  std::vector<Bits> cover(static_cast<std::size_t>(g.edge_slots()), Bits(words, 0));
  for (std::size_t p = 0; p < paths.size(); ++p)
    for (EdgeId e : paths[p].path.edges) cover[e][p / 64] |= std::uint64_t{1} << (p % 64);
  return cover;
}

bool subset_of(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

bool empty_bits(const Bits& a) {
  return std::all_of(a.begin(), a.end(), [](std::uint64_t w) { return w == 0; });
}

struct Scan {
  std::vector<EdgeId> redundant;  // contractible, ascending
  std::vector<EdgeId> frozen;
};

Scan scan_redundant(const IrreducibleState& st, bool stop_at_first) {
  Scan out;
  const Graph& g = st.graph;
  const auto cover = coverage(g, st.paths);
  const auto live = g.live_edges();
  for (EdgeId e : live) {
    const auto [a, b] = g.ends(e);
    if (a == b || st.protected_node[a] || st.protected_node[b]) continue;
    const bool redundant = std::any_of(live.begin(), live.end(), [&](EdgeId f) {
      return f != e && subset_of(cover[e], cover[f]);
    });
    if (!redundant) continue;
    bool parallel_used = false;
    for (EdgeId f : g.incident_edges(a))
      if (f != e && g.other(f, a) == b && !empty_bits(cover[f])) parallel_used = true;
    if (parallel_used) {
      out.frozen.push_back(e);
      continue;
    }
    out.redundant.push_back(e);
    if (stop_at_first) break;
  }
  return out;
}

PathSeq contract_in_path(const PathSeq& p, EdgeId e, const std::vector<NodeId>& node_map) {
  PathSeq out;
  out.nodes.push_back(node_map[p.nodes[0]]);
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (p.edges[i] == e) continue;
    out.edges.push_back(p.edges[i]);
    out.nodes.push_back(node_map[p.nodes[i + 1]]);
  }
  return out;
}

}  // namespace

IrreducibleState reduce_irreducible(const Graph& g, std::span<const RoutedPath> paths, int c,
                                    std::span<const NodeId> protected_nodes) {
  IrreducibleState st;
  st.graph = g;
  st.paths.assign(paths.begin(), paths.end());
  st.original = st.paths;
  st.congestion = c;
  st.node_map.resize(static_cast<std::size_t>(g.node_count()));
  std::iota(st.node_map.begin(), st.node_map.end(), 0);
  st.protected_node.assign(static_cast<std::size_t>(g.node_count()), 0);
  for (NodeId v : protected_nodes) st.protected_node.at(v) = 1;
  for (const auto& rp : st.paths)
    if (!is_walk(g, rp.path)) throw Error("reduce_irreducible: input path is not a walk");
  {
    const auto cover = coverage(g, st.paths);
    for (EdgeId e : g.live_edges()) {
      int count = 0;
      for (std::uint64_t w : cover[e]) count += std::popcount(w);
      if (count > c) throw Error("reduce_irreducible: edge covered by more than c paths");
    }
  }

  for (;;) {
    const Scan scan = scan_redundant(st, true);
    if (scan.redundant.empty()) {
      st.frozen = scan.frozen;
      break;
    }
    const EdgeId e = scan.redundant.front();
    Contraction con = contract_edge(st.graph, e);
    for (auto& rp : st.paths) rp.path = contract_in_path(rp.path, e, con.node_map);
    std::vector<char> prot(static_cast<std::size_t>(con.graph.node_count()), 0);
    for (NodeId v = 0; v < st.graph.node_count(); ++v)
      if (st.protected_node[v]) prot[con.node_map[v]] = 1;
    for (auto& m : st.node_map) m = con.node_map[m];
    st.protected_node = std::move(prot);
    st.graph = std::move(con.graph);
    st.contracted.push_back(e);
  }
  return st;
}

std::vector<EdgeId> redundant_edges(const IrreducibleState& state) { return scan_redundant(state, false).redundant; }

double average_path_length(const IrreducibleState& state) {
  if (state.paths.empty()) return 0.0;
  double total = 0.0;
  for (const auto& rp : state.paths) total += rp.path.length();
  return total / static_cast<double>(state.paths.size());
}

Routing lift_routing(const IrreducibleState& state, std::span<const int> selected) {
  std::vector<char> used(static_cast<std::size_t>(state.graph.edge_slots()), 0);
  Routing out;
  for (int idx : selected) {
    if (idx < 0 || idx >= static_cast<int>(state.paths.size())) throw Error("lift_routing: unknown path");
    auto edges = state.paths[idx].path.edges;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (EdgeId e : edges) {
      if (used[e]) throw Error("lift_routing: selection is not edge-disjoint in the minor");
      used[e] = 1;
    }
    out.entries.push_back(state.original[idx]);
  }
  return out;
}

GreedySelection greedy_select_short(const IrreducibleState& state, double r_prime, int c) {
  GreedySelection out;
  const int count = static_cast<int>(state.paths.size());
  std::vector<int> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return state.paths[a].path.length() < state.paths[b].path.length();
  });
  out.shortlisted = (count + 1) / 2;
  order.resize(static_cast<std::size_t>(out.shortlisted));
  std::sort(order.begin(), order.end());
  const double max_len = 4.0 * r_prime * (c + 1);
  out.length_hypothesis = std::all_of(order.begin(), order.end(), [&](int p) {
    return state.paths[p].path.length() <= max_len + 1e-9;
  });
  out.guaranteed = out.shortlisted / (4.0 * r_prime * c * (c + 1));
  std::vector<char> used(static_cast<std::size_t>(state.graph.edge_slots()), 0);
  for (int p : order) {
    const auto& edges = state.paths[p].path.edges;
    if (std::any_of(edges.begin(), edges.end(), [&](EdgeId e) { return used[e] != 0; })) continue;
    for (EdgeId e : edges) used[e] = 1;
    out.selected.push_back(p);
  }
  return out;
}

NodeRouting route_through_node(const Instance& inst, const FractionalSolution& frac, NodeId v) {
  const Graph& g = inst.graph;
  NodeRouting out;
  std::map<int, double> weight_of;
  for (const auto& wp : frac.paths) {
    if (std::find(wp.path.nodes.begin(), wp.path.nodes.end(), v) == wp.path.nodes.end())
      throw Error("route_through_node: a flow path misses node " + std::to_string(v));
    out.demand += wp.weight;
    weight_of[wp.pair] += wp.weight;
  }
  out.required = static_cast<int>(std::ceil(out.demand / 12.0 - 1e-9));

  std::vector<int> active;
  for (const auto& [pair, w] : weight_of) active.push_back(pair);

  while (!active.empty()) {
    ++out.flow_rounds;
    detail::MaxFlow net(g.node_count());
    std::vector<std::pair<int, int>> edge_arcs;  // per live edge: arc a->b, arc b->a
    std::vector<EdgeId> arc_edge;
    const auto live = g.live_edges();
    for (EdgeId e : live) {
      const auto [a, b] = g.ends(e);
      if (a == b) continue;
      edge_arcs.push_back({net.add_arc(a, b, 1), net.add_arc(b, a, 1)});
      arc_edge.push_back(e);
    }
    const int sink = net.add_node();
    std::vector<int> gadget;
    std::map<int, int> pair_of_gadget;
    for (int pair : active) {
      const int w = net.add_node();
      gadget.push_back(w);
      pair_of_gadget[w] = pair;
      net.add_arc(inst.pairs[pair].s, w, 1);
      net.add_arc(inst.pairs[pair].t, w, 1);
      net.add_arc(w, sink, 2);
    }
    net.run(v, sink);

    // Remaining flow per forward arc, with opposite flows on one edge cancelled.
    std::map<int, int> rem;
    std::map<int, EdgeId> edge_of_arc;
    for (std::size_t i = 0; i < edge_arcs.size(); ++i) {
      const auto [ab, ba] = edge_arcs[i];
      const int fab = net.flow(ab), fba = net.flow(ba);
      rem[ab] = fab > fba ? 1 : 0;
      rem[ba] = fba > fab ? 1 : 0;
      edge_of_arc[ab] = arc_edge[i];
      edge_of_arc[ba] = arc_edge[i];
    }
    std::map<int, std::vector<PathSeq>> legs;
    std::map<int, int> terminal_arc_rem;
    for (int node = 0; node < g.node_count(); ++node)
      for (int a : net.out(node))
        if ((a & 1) == 0 && !edge_of_arc.contains(a)) terminal_arc_rem[a] = net.flow(a);

    for (;;) {
      PathSeq walk;
      walk.nodes.push_back(v);
      int at = v;
      int reached = -1;
      for (int guard = 0; guard <= 4 * g.edge_slots() + 4 && reached < 0; ++guard) {
        int next_arc = -1;
        for (int a : net.out(at)) {
          if (a & 1) continue;
          if (auto it = rem.find(a); it != rem.end() && it->second > 0) {
            next_arc = a;
            break;
          }
          if (auto it = terminal_arc_rem.find(a); it != terminal_arc_rem.end() && it->second > 0) {
            next_arc = a;
            break;
          }
        }
        if (next_arc < 0) break;
        if (auto it = terminal_arc_rem.find(next_arc); it != terminal_arc_rem.end()) {
          --it->second;
          reached = net.head(next_arc);
        } else {
          --rem[next_arc];
          walk.edges.push_back(edge_of_arc[next_arc]);
          at = net.head(next_arc);
          walk.nodes.push_back(at);
        }
      }
      if (reached < 0) break;
      legs[pair_of_gadget[reached]].push_back(std::move(walk));
    }

    Routing routing;
    std::vector<int> half;
    for (int pair : active) {
      auto it = legs.find(pair);
      const std::size_t units = it == legs.end() ? 0 : it->second.size();
      if (units == 1) half.push_back(pair);
      if (units != 2) continue;
      const auto [s, t] = inst.pairs[pair];
      const PathSeq& l0 = it->second[0];
      const PathSeq& l1 = it->second[1];
      const PathSeq& to_s = l0.back() == s ? l0 : l1;
      const PathSeq& to_t = l0.back() == s ? l1 : l0;
      PathSeq joined = reversed(to_s);
      joined.nodes.insert(joined.nodes.end(), to_t.nodes.begin() + 1, to_t.nodes.end());
      joined.edges.insert(joined.edges.end(), to_t.edges.begin(), to_t.edges.end());
      routing.entries.push_back(RoutedPath{pair, loop_erase(joined)});
    }
    if (routing.size() > out.routing.size()) out.routing = std::move(routing);
    if (half.empty()) break;
    std::erase_if(active, [&](int p) { return std::find(half.begin(), half.end(), p) != half.end(); });
  }

  if (out.routing.size() < out.required) {
    std::vector<std::pair<double, int>> ranked;
    for (const auto& [pair, w] : weight_of) ranked.push_back({-w, pair});
    std::sort(ranked.begin(), ranked.end());
    if (ranked.size() > 12) ranked.resize(12);
    Instance sub;
    sub.graph = g;
    sub.mode = Mode::edge_disjoint;
    for (const auto& [w, pair] : ranked) sub.pairs.push_back(inst.pairs[pair]);
    OracleGuard force;
    force.force = true;
    OracleResult exact = exact_opt(sub, force);
    if (exact.value > out.routing.size()) {
      out.routing.entries.clear();
      for (auto& rp : exact.witness.entries) out.routing.entries.push_back(RoutedPath{ranked[rp.pair].second, rp.path});
      out.used_fallback = true;
    }
  }
  std::sort(out.routing.entries.begin(), out.routing.entries.end(),
            [](const RoutedPath& a, const RoutedPath& b) { return a.pair < b.pair; });
  return out;
}

int count_visits(const PathSeq& p, std::span<const NodeId> nodes) {
  std::vector<NodeId> seen;
  for (NodeId v : p.nodes)
    if (std::binary_search(nodes.begin(), nodes.end(), v)) seen.push_back(v);
  std::sort(seen.begin(), seen.end());
  return static_cast<int>(std::unique(seen.begin(), seen.end()) - seen.begin());
}

EdpApproxResult approx_edp(const Instance& inst, const EdpApproxOptions& options) {
  EdpApproxResult res;
  res.rounding = round_with_retries(inst, options.rounding);
  const Routing& rounded = res.rounding.best.routing;
  res.rounded_size = rounded.size();
  res.achieved_congestion = std::max(1, res.rounding.best.congestion);
  const int c = res.achieved_congestion;
  const std::vector<NodeId>& fvs = res.rounding.fvs.nodes;
  const Graph& g = inst.graph;

  if (fvs.empty()) {
    res.case_used = "forest";
    std::vector<char> used(static_cast<std::size_t>(g.edge_slots()), 0);
    for (const auto& rp : rounded.entries) {
      if (std::any_of(rp.path.edges.begin(), rp.path.edges.end(), [&](EdgeId e) { return used[e] != 0; })) continue;
      for (EdgeId e : rp.path.edges) used[e] = 1;
      res.routing.entries.push_back(rp);
    }
    return res;
  }

  const int r = static_cast<int>(fvs.size());
  res.r_prime = std::max(1.0, std::sqrt(static_cast<double>(r) / c));
  std::vector<RoutedPath> few, many;
  for (const auto& rp : rounded.entries) {
    const int visits = count_visits(rp.path, fvs);
    if (visits <= res.r_prime + 1e-9) few.push_back(rp);
    if (visits >= res.r_prime - 1e-9) many.push_back(rp);
  }
  res.case1_paths = static_cast<int>(few.size());
  res.case2_paths = static_cast<int>(many.size());

  Routing case1, case2;
  if (!few.empty()) {
    res.case1_ran = true;
    const IrreducibleState st = reduce_irreducible(g, few, c, fvs);
    res.case1 = greedy_select_short(st, res.r_prime, c);
    case1 = lift_routing(st, res.case1.selected);
  }
  if (!many.empty()) {
    res.case2_ran = true;
    res.case2_total_flow = static_cast<double>(many.size()) / c;
    NodeId best = kNoNode;
    int best_count = -1;
    for (NodeId v : fvs) {
      int count = 0;
      for (const auto& rp : many)
        if (std::find(rp.path.nodes.begin(), rp.path.nodes.end(), v) != rp.path.nodes.end()) ++count;
      if (count > best_count) {
        best_count = count;
        best = v;
      }
    }
    res.case2_node = best;
    res.case2_inflow = static_cast<double>(best_count) / c;
    FractionalSolution sub;
    sub.marginals.assign(static_cast<std::size_t>(inst.pair_count()), 0.0);
    for (const auto& rp : many) {
      if (std::find(rp.path.nodes.begin(), rp.path.nodes.end(), best) == rp.path.nodes.end()) continue;
      sub.paths.push_back(WeightedPath{rp.pair, rp.path, 1.0 / c});
      sub.marginals[rp.pair] += 1.0 / c;
      sub.objective += 1.0 / c;
    }
    if (!sub.paths.empty()) {
      res.case2 = route_through_node(inst, sub, best);
      case2 = res.case2.routing;
    }
  }
  res.case1_size = case1.size();
  res.case2_size = case2.size();
  if (res.case1_ran && res.case2_ran && case1.size() == case2.size()) res.case_used = "both";
  else if (case1.size() >= case2.size() && res.case1_ran) res.case_used = "1";
  else res.case_used = "2";
  res.routing = case1.size() >= case2.size() ? std::move(case1) : std::move(case2);
  return res;
}

}  // namespace djp
