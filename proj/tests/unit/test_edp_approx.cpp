#include <cmath>
#include <random>

#include "brute.hpp"
#include "djp/edp_approx.hpp"
#include "djp/generators.hpp"
#include "djp/oracle.hpp"
#include "doctest.h"

using namespace djp;
using djp::test::make_graph;
using djp::test::make_instance;
using djp::test::routed;

namespace {

// Path of length c-1 (nodes 0..c-1) with c-1 leaves hung off node c-1:
// c-1 long paths from node 0 to each leaf, one unit path per edge.
std::pair<Graph, std::vector<RoutedPath>> star_example(int c) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < c; ++i) edges.emplace_back(i, i + 1);
  for (int j = 0; j < c - 1; ++j) edges.emplace_back(c - 1, c + j);
  const Graph g = make_graph(2 * c - 1, edges);
  std::vector<RoutedPath> paths;
  int pair = 0;
  for (int j = 0; j < c - 1; ++j) {
    std::vector<NodeId> nodes;
    for (int i = 0; i < c; ++i) nodes.push_back(i);
    nodes.push_back(c + j);
    paths.push_back(routed(g, pair++, nodes));
  }
  for (int i = 0; i + 1 < c; ++i) paths.push_back(routed(g, pair++, {i, i + 1}));
  for (int j = 0; j < c - 1; ++j) paths.push_back(routed(g, pair++, {c - 1, c + j}));
  return {g, paths};
}

}  // namespace

TEST_CASE("irreducible: a lone path shrinks to one edge") {
  const Graph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  const std::vector<RoutedPath> paths{routed(g, 0, {0, 1, 2, 3})};
  const IrreducibleState st = reduce_irreducible(g, paths, 1, {});
  REQUIRE(st.paths.size() == 1);
  CHECK(st.paths[0].path.length() == 1);
  CHECK(st.contracted.size() == 2);
  CHECK(redundant_edges(st).empty());
}

TEST_CASE("irreducible: protected endpoints keep their edges") {
  const Graph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  const std::vector<RoutedPath> paths{routed(g, 0, {0, 1, 2, 3})};
  const std::vector<NodeId> prot{0, 3};
  const IrreducibleState st = reduce_irreducible(g, paths, 1, prot);
  CHECK(st.paths[0].path.length() == 2);
  CHECK(st.node_map[0] != st.node_map[3]);
}

TEST_CASE("irreducible: the star example is already irreducible") {
  for (int c = 2; c <= 6; ++c) {
    const auto [g, paths] = star_example(c);
    CHECK(djp::test::max_load(g, Routing{paths}) == c);
    const IrreducibleState st = reduce_irreducible(g, paths, c, {});
    CHECK(st.contracted.empty());
    CHECK(average_path_length(st) == doctest::Approx((c + 2) / 3.0));
  }
  const auto [g4, p4] = star_example(4);
  CHECK(average_path_length(reduce_irreducible(g4, p4, 4, {})) == doctest::Approx(2.0));
}

TEST_CASE("irreducible: coverage above c is rejected") {
  const Graph g = make_graph(2, {{0, 1}});
  const std::vector<RoutedPath> paths{routed(g, 0, {0, 1}), routed(g, 1, {0, 1})};
  CHECK_THROWS_AS((void)reduce_irreducible(g, paths, 1, {}), Error);
}

TEST_CASE("lift: empty and singleton selections") {
  const Graph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  const std::vector<RoutedPath> paths{routed(g, 0, {0, 1, 2, 3})};
  const IrreducibleState st = reduce_irreducible(g, paths, 1, {});
  CHECK(lift_routing(st, {}).size() == 0);
  const std::vector<int> one{0};
  const Routing r = lift_routing(st, one);
  REQUIRE(r.size() == 1);
  CHECK(r.entries[0].path == paths[0].path);
}

TEST_CASE("greedy: disjoint paths, then paths sharing one edge") {
  const Graph g = make_graph(8, {{0, 1}, {2, 3}, {3, 4}, {5, 6}, {6, 7}});
  const std::vector<RoutedPath> disjoint{routed(g, 0, {0, 1}), routed(g, 1, {2, 3, 4}), routed(g, 2, {5, 6, 7})};
  const std::vector<NodeId> prot{0, 1, 2, 3, 4, 5, 6, 7};
  const IrreducibleState a = reduce_irreducible(g, disjoint, 1, prot);
  const GreedySelection sa = greedy_select_short(a, 1.0, 1);
  CHECK(sa.shortlisted == 2);
  CHECK(sa.selected == std::vector<int>{0, 1});

  const Graph star = make_graph(5, {{0, 1}, {1, 2}, {1, 3}, {1, 4}});
  const std::vector<RoutedPath> shared{routed(star, 0, {0, 1, 2}), routed(star, 1, {0, 1, 3}),
                                       routed(star, 2, {0, 1, 4})};
  const std::vector<NodeId> all{0, 1, 2, 3, 4};
  const IrreducibleState b = reduce_irreducible(star, shared, 3, all);
  const GreedySelection sb = greedy_select_short(b, 1.0, 3);
  CHECK(sb.selected.size() == 1);
}

TEST_CASE("route_through_node: one pair and a star of pairs") {
  {
    const Instance inst = make_instance(3, {{0, 1}, {1, 2}}, {{0, 2}});
    FractionalSolution frac;
    frac.marginals = {1.0};
    frac.paths.push_back({0, path_from_nodes(inst.graph, std::vector<NodeId>{0, 1, 2}), 1.0});
    const NodeRouting nr = route_through_node(inst, frac, 1);
    CHECK(nr.routing.size() == 1);
    CHECK(verify_routing(inst, nr.routing, 1).feasible);
  }
  {
    const int k = 5;
    std::vector<std::pair<int, int>> edges, pairs;
    for (int i = 0; i < k; ++i) {
      edges.emplace_back(0, 1 + 2 * i);
      edges.emplace_back(0, 2 + 2 * i);
      pairs.emplace_back(1 + 2 * i, 2 + 2 * i);
    }
    const Instance inst = make_instance(2 * k + 1, edges, pairs);
    FractionalSolution frac;
    for (int i = 0; i < k; ++i) {
      frac.marginals.push_back(1.0);
      frac.paths.push_back({i, path_from_nodes(inst.graph, std::vector<NodeId>{1 + 2 * i, 0, 2 + 2 * i}), 1.0});
    }
    const NodeRouting nr = route_through_node(inst, frac, 0);
    CHECK(nr.routing.size() == k);
    CHECK(nr.required == 1);
    CHECK(verify_routing(inst, nr.routing, 1).feasible);
  }
  {
    const Instance inst = make_instance(3, {{0, 1}, {1, 2}}, {{0, 1}});
    FractionalSolution frac;
    frac.marginals = {1.0};
    frac.paths.push_back({0, path_from_nodes(inst.graph, std::vector<NodeId>{0, 1}), 1.0});
    CHECK_THROWS_AS((void)route_through_node(inst, frac, 2), Error);
  }
}

TEST_CASE("approx_edp: forest routes everything") {
  const Instance inst =
      normalize_instance(make_instance(7, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {5, 6}}, {{0, 2}, {3, 6}}));
  const EdpApproxResult res = approx_edp(inst);
  CHECK(res.routing.size() == 2);
  CHECK(res.case_used == "forest");
  CHECK(verify_routing(inst, res.routing, 1).feasible);
}

TEST_CASE("approx_edp: grid instances route one pair") {
  for (int k = 2; k <= 4; ++k) {
    const Instance inst = gen_grid_gap(k).instance;
    const EdpApproxResult res = approx_edp(inst);
    CHECK(res.routing.size() >= 1);
    CHECK(verify_routing(inst, res.routing, 1).feasible);
  }
}

TEST_CASE("approx_edp: feasible on random instances, never above the oracle") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Instance inst = gen_random_fvs(6 + seed % 5, 1 + seed % 3, 2 + seed % 4, 2 + seed % 4, seed).instance;
    EdpApproxOptions opt;
    opt.rounding.seed = seed;
    const EdpApproxResult res = approx_edp(inst, opt);
    CHECK(verify_routing(inst, res.routing, 1).feasible);
    CHECK(res.routing.size() <= exact_opt(inst).value);
    if (res.case2_ran) {
      CHECK(res.case2.routing.size() >= res.case2.required);
      CHECK(verify_routing(inst, res.case2.routing, 1).feasible);
    }
    if (res.case1_ran) CHECK(res.case1.selected.size() <= static_cast<std::size_t>(res.case1.shortlisted));
  }
}
