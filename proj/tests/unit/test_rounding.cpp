#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "brute.hpp"
#include "djp/fvs.hpp"
#include "djp/generators.hpp"
#include "djp/mcf_lp.hpp"
#include "djp/rounding.hpp"
#include "doctest.h"

using namespace djp;
using djp::test::make_graph;
using djp::test::make_instance;

namespace {

WeightedPath weighted(const Graph& g, int pair, const std::vector<NodeId>& nodes, double w) {
  return WeightedPath{pair, path_from_nodes(g, nodes), w};
}

// Subpath audit written from the definition: cut each path at its R+ visits
// and require a hot spot strictly inside every piece with a non-empty interior.
bool every_subpath_has_hot_spot(const HotSpotState& st) {
  std::set<NodeId> rplus(st.rplus.begin(), st.rplus.end());
  const auto hot_nodes = st.hot_spot_nodes();
  std::set<NodeId> hot(hot_nodes.begin(), hot_nodes.end());
  for (const WeightedPath& wp : st.solution.paths) {
    std::size_t last = 0;
    for (std::size_t i = 1; i < wp.path.nodes.size(); ++i) {
      if (!rplus.count(wp.path.nodes[i])) continue;
      if (i - last >= 2) {
        bool found = false;
        for (std::size_t j = last + 1; j < i; ++j) found = found || hot.count(wp.path.nodes[j]) > 0;
        if (!found) return false;
      }
      last = i;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("R+: terminals join the FVS") {
  const Instance forest = make_instance(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}}, {{0, 2}, {3, 5}});
  CHECK(augment_fvs_with_terminals(forest, {}) == std::vector<NodeId>{0, 2, 3, 5});

  // C_6 with chords 0-3 and 1-4, R = {0}.
  const Instance c6 = make_instance(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 3}, {1, 4}}, {{1, 3}, {2, 5}});
  const std::vector<NodeId> r{0};
  const auto rplus = augment_fvs_with_terminals(c6, r);
  CHECK(rplus.size() == 5);
  CHECK(djp::test::acyclic_without(c6.graph, rplus));
}

TEST_CASE("R+: generated instances stay acyclic after removal") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Generated g = gen_random_fvs(6 + seed % 7, 1 + seed % 3, 3 + seed % 4, 2 + seed % 3, seed);
    CHECK(djp::test::acyclic_without(g.instance.graph, augment_fvs_with_terminals(g.instance, g.fvs)));
  }
}

TEST_CASE("subpaths: cut at R+ visits") {
  // s=0, a=1, v=2, b=3, t=4
  const Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  FractionalSolution sol;
  sol.marginals = {1.0};
  sol.paths.push_back(weighted(g, 0, {0, 1, 2, 3, 4}, 1.0));
  const std::vector<NodeId> ends{0, 4};
  const SubpathIndex one = build_subpath_index(sol, make_forest_view(g, ends));
  REQUIRE(one.subpaths.size() == 1);
  CHECK(one.subpaths[0].first == 0);
  CHECK(one.subpaths[0].last == 4);

  const std::vector<NodeId> with_v{0, 2, 4};
  const SubpathIndex two = build_subpath_index(sol, make_forest_view(g, with_v));
  REQUIRE(two.subpaths.size() == 2);
  CHECK(two.subpaths[0].last == 2);
  CHECK(two.subpaths[1].first == 2);
  CHECK(two.visits[0] == std::vector<int>{0, 2, 4});
}

TEST_CASE("subpaths: count equals R+ visits minus one per path") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Generated gen = gen_random_fvs(8 + seed % 6, 1 + seed % 3, 3 + seed % 5, 2 + seed % 4, seed);
    const Instance& inst = gen.instance;
    const auto rplus = augment_fvs_with_terminals(inst, gen.fvs);
    const FractionalSolution sol = decompose_paths(inst.graph, solve_lp(inst));
    const SubpathIndex idx = build_subpath_index(sol, make_forest_view(inst.graph, rplus));
    std::set<NodeId> in(rplus.begin(), rplus.end());
    std::size_t expected = 0;
    for (const WeightedPath& wp : sol.paths) {
      std::size_t visits = 0;
      for (NodeId v : wp.path.nodes) visits += in.count(v);
      expected += visits - 1;
    }
    CHECK(idx.subpaths.size() == expected);
  }
}

TEST_CASE("aggregate: single path gets one hot spot and no reroute") {
  const Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  FractionalSolution sol;
  sol.marginals = {1.0};
  sol.objective = 1.0;
  sol.paths.push_back(weighted(g, 0, {0, 1, 2, 3, 4}, 1.0));
  const std::vector<NodeId> rplus{0, 4};
  const HotSpotState st = aggregate_flow(g, sol, rplus);
  CHECK(st.hot_spots.size() == 1);
  CHECK(st.reroutes.empty());
  REQUIRE(st.solution.paths.size() == 1);
  CHECK(st.solution.paths[0].path == sol.paths[0].path);
  CHECK(every_subpath_has_hot_spot(st));
}

TEST_CASE("aggregate: two half flows share a corridor after one reroute") {
  // Leaves s1=0 t1=1 s2=2 t2=3; hubs A=4 B=5; forest star around c=8 with
  // arms a1=6 a2=7 b1=9 b2=10.
  const Graph g = make_graph(11, {{0, 4}, {2, 4}, {1, 5}, {3, 5}, {4, 6}, {4, 7}, {5, 9}, {5, 10},
                                  {6, 8}, {7, 8}, {8, 9}, {8, 10}});
  FractionalSolution sol;
  sol.marginals = {0.5, 0.5};
  sol.objective = 1.0;
  sol.paths.push_back(weighted(g, 0, {0, 4, 6, 8, 9, 5, 1}, 0.5));
  sol.paths.push_back(weighted(g, 1, {2, 4, 7, 8, 10, 5, 3}, 0.5));
  const std::vector<NodeId> rplus{0, 1, 2, 3, 4, 5};
  const HotSpotState st = aggregate_flow(g, sol, rplus);
  REQUIRE(st.reroutes.size() == 1);
  CHECK(st.reroutes[0].weight == doctest::Approx(0.5));
  CHECK(st.reroutes[0].pair == 0);
  REQUIRE(st.hot_spots.size() == 1);
  CHECK(st.hot_spots[0].node == 8);
  CHECK(st.hot_spots[0].class_weight == doctest::Approx(1.0));
  const auto w = pair_weights(st.solution, 2);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(0.5));
  for (const WeightedPath& wp : st.solution.paths) {
    const std::vector<NodeId> mid(wp.path.nodes.begin() + 1, wp.path.nodes.end() - 1);
    CHECK(mid == std::vector<NodeId>{4, 7, 8, 10, 5});
  }
  const auto load = fractional_congestion(g, st.solution);
  CHECK(load[*g.find_edge(7, 8)] == doctest::Approx(1.0));
  CHECK(load[*g.find_edge(6, 8)] == doctest::Approx(0.0));
  CHECK(every_subpath_has_hot_spot(st));
  CHECK(uncovered_subpaths(st).empty());
}

TEST_CASE("aggregate: generated instances pass the audit") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Generated gen = gen_random_fvs(8 + seed % 10, 1 + seed % 4, 3 + seed % 6, 2 + seed % 5, seed);
    const Instance& inst = gen.instance;
    const auto rplus = augment_fvs_with_terminals(inst, gen.fvs);
    const FractionalSolution sol = decompose_paths(inst.graph, solve_lp(inst));
    const HotSpotState st = aggregate_flow(inst.graph, sol, rplus);
    CHECK(every_subpath_has_hot_spot(st));
    CHECK(uncovered_subpaths(st).empty());
    const auto before = pair_weights(sol, inst.pair_count());
    const auto after = pair_weights(st.solution, inst.pair_count());
    for (int i = 0; i < inst.pair_count(); ++i) CHECK(after[i] == doctest::Approx(before[i]).epsilon(1e-7));
    for (double l : fractional_congestion(inst.graph, st.solution)) CHECK(l <= 2.0 + 1e-6);
  }
}

TEST_CASE("extended hot spots") {
  // Star with center 1 and arms 2, 3, 4 inside F; R+ = {0, 5}.
  const Graph g = make_graph(6, {{0, 2}, {1, 2}, {1, 3}, {1, 4}, {4, 5}});
  HotSpotState st;
  st.rplus = {0, 5};
  st.forest = make_forest_view(g, st.rplus);
  st.hot_spots.push_back({3, 0, 5, 0, 1.0});
  CHECK(extend_hotspots_for_analysis(g, st) == std::vector<NodeId>{0, 3, 5});

  st.hot_spots.push_back({2, 0, 5, 0, 1.0});
  st.hot_spots.push_back({4, 0, 5, 0, 1.0});
  CHECK(extend_hotspots_for_analysis(g, st) == std::vector<NodeId>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("congestion bound") {
  auto formula = [](int k, int r, double c) {
    const double kappa = std::max(4.0, static_cast<double>(k) * std::max(1, r));
    const double l = std::log(kappa);
    return std::max(2, static_cast<int>(std::ceil(c * l / std::log(std::max(std::numbers::e, l)))));
  };
  CHECK(congestion_bound(1, 1, 1.0) == 2);
  CHECK(congestion_bound(1, 1, 2.0) == formula(1, 1, 2.0));
  CHECK(congestion_bound(1, 0, 2.0) == congestion_bound(1, 1, 2.0));
  CHECK(congestion_bound(100, 10, 2.0) == 8);
  CHECK(formula(100, 10, 2.0) == 8);
  for (int k = 1; k <= 30; ++k)
    for (int r = 0; r <= 6; ++r) {
      CHECK(congestion_bound(k, r, 2.0) == formula(k, r, 2.0));
      CHECK(congestion_bound(k, r, 2.0) <= congestion_bound(k + 1, r, 2.0));
      CHECK(congestion_bound(k, r, 2.0) <= congestion_bound(k, r + 1, 2.0));
    }
}

TEST_CASE("randomized rounding: integral and zero marginals") {
  const Graph g = make_graph(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}});
  FractionalSolution sol;
  sol.marginals = {1.0, 0.0};
  sol.objective = 1.0;
  sol.paths.push_back(weighted(g, 0, {0, 1, 2}, 1.0));
  const std::vector<NodeId> rplus{0, 2, 3, 5};
  const HotSpotState st = aggregate_flow(g, sol, rplus);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RoundedRouting rr = randomized_round(g, st, seed);
    REQUIRE(rr.routing.size() == 1);
    CHECK(rr.routing.entries[0].pair == 0);
    CHECK(rr.congestion == 1);
  }
}

TEST_CASE("randomized rounding: frequency follows the marginal") {
  // Two routes for one pair with total flow 0.6; the middle nodes are in R+
  // so aggregation leaves both routes alone.
  const Graph g = make_graph(4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  FractionalSolution sol;
  sol.marginals = {0.6};
  sol.objective = 0.6;
  sol.paths.push_back(weighted(g, 0, {0, 1, 3}, 0.4));
  sol.paths.push_back(weighted(g, 0, {0, 2, 3}, 0.2));
  const std::vector<NodeId> rplus{0, 1, 2, 3};
  const HotSpotState st = aggregate_flow(g, sol, rplus);
  int routed = 0, upper = 0;
  const int samples = 4000;
  for (int s = 0; s < samples; ++s) {
    const RoundedRouting rr = randomized_round(g, st, 1000 + s);
    if (rr.routing.size() == 0) continue;
    ++routed;
    upper += rr.routing.entries[0].path.nodes[1] == 1 ? 1 : 0;
  }
  CHECK(std::abs(routed / double(samples) - 0.6) < 0.03);
  CHECK(std::abs(upper / double(routed) - 2.0 / 3.0) < 0.04);
}

TEST_CASE("round_with_retries: forest with disjoint paths") {
  const Instance inst = normalize_instance(make_instance(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}}, {{0, 2}, {3, 5}}));
  const RoundOutcome out = round_with_retries(inst);
  CHECK(out.success);
  CHECK(out.trials_used == 1);
  CHECK(out.best.congestion == 1);
  CHECK(out.best.routing.size() == 2);
  CHECK(verify_routing(inst, out.best.routing, 1).feasible);
}

TEST_CASE("round_with_retries: grid instances") {
  for (int k = 2; k <= 4; ++k) {
    const Instance inst = gen_grid_gap(k).instance;
    const RoundOutcome out = round_with_retries(inst);
    CHECK(out.lp_objective >= k / 2.0 - 1e-6);
    CHECK(out.best.routing.size() * 4 >= k);
    CHECK(out.best.congestion <= out.congestion_cap);
    CHECK(djp::test::max_load(inst.graph, out.best.routing) == out.best.congestion);
    CHECK(verify_routing(inst, out.best.routing, out.best.congestion).feasible);
  }
}

TEST_CASE("round_with_retries: reported congestion matches an independent count") {
  int successes = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = gen_random_fvs(8 + seed % 8, 1 + seed % 3, 3 + seed % 5, 2 + seed % 5, seed).instance;
    RoundOptions opt;
    opt.seed = seed;
    const RoundOutcome out = round_with_retries(inst, opt);
    successes += out.success ? 1 : 0;
    CHECK(djp::test::max_load(inst.graph, out.best.routing) == out.best.congestion);
    CHECK(verify_routing(inst, out.best.routing, std::max(1, out.best.congestion)).feasible);
  }
  CHECK(successes >= 27);
}
