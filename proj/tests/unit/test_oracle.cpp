#include <algorithm>
#include <random>

#include "brute.hpp"
#include "djp/generators.hpp"
#include "djp/oracle.hpp"
#include "doctest.h"

using namespace djp;
using djp::test::make_instance;

TEST_CASE("oracle: pairs in separate trees are all routed") {
  const Instance inst = normalize_instance(
      make_instance(7, {{0, 1}, {1, 2}, {3, 4}, {5, 6}}, {{0, 2}, {3, 4}, {5, 6}}));
  const OracleResult res = exact_opt(inst);
  CHECK(res.value == 3);
  CHECK(verify_routing(inst, res.witness, 1).feasible);
}

TEST_CASE("oracle: grid instances route exactly one pair") {
  for (int k = 2; k <= 3; ++k) {
    const Instance inst = gen_grid_gap(k).instance;
    const OracleResult res = exact_opt(inst, OracleGuard{.force = true});
    CHECK(res.value == 1);
    CHECK(verify_routing(inst, res.witness, 1).feasible);
  }
}

TEST_CASE("oracle: K4 coloring instance routes all six pairs") {
  const Instance inst = gen_coloring_r2(builtin_cubic("k4")).instance;
  const OracleResult res = exact_opt(inst, OracleGuard{.force = true});
  CHECK(res.value == 6);
  CHECK(verify_routing(inst, res.witness, 1).feasible);
}

TEST_CASE("oracle: agrees with path enumeration in both modes") {
  std::mt19937_64 rng(4242);
  for (int it = 0; it < 60; ++it) {
    const Mode mode = it % 2 ? Mode::node_disjoint : Mode::edge_disjoint;
    const Instance inst =
        normalize_instance(djp::test::random_instance(4 + it % 8, 1 + it % 6, 1 + it % 5, rng, mode));
    const OracleResult res = exact_opt(inst);
    CHECK(res.value == djp::test::brute_max_routing(inst));
    CHECK(res.witness.size() == res.value);
    CHECK(verify_routing(inst, res.witness, 1).feasible);
  }
}

TEST_CASE("oracle: relabelling nodes keeps the optimum") {
  std::mt19937_64 rng(8);
  for (int it = 0; it < 20; ++it) {
    const Mode mode = it % 2 ? Mode::node_disjoint : Mode::edge_disjoint;
    const Instance inst =
        normalize_instance(djp::test::random_instance(5 + it % 6, 2 + it % 4, 2 + it % 3, rng, mode));
    std::vector<NodeId> perm(static_cast<std::size_t>(inst.graph.node_count()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Instance moved;
    moved.mode = inst.mode;
    moved.graph = Graph(inst.graph.node_count());
    auto edges = inst.graph.live_edges();
    std::shuffle(edges.begin(), edges.end(), rng);
    for (EdgeId e : edges) moved.graph.add_edge(perm[inst.graph.ends(e).a], perm[inst.graph.ends(e).b]);
    for (const auto& [s, t] : inst.pairs) moved.pairs.push_back({perm[s], perm[t]});
    CHECK(exact_opt(moved).value == exact_opt(inst).value);
  }
}

TEST_CASE("oracle: fixed subsets") {
  const Instance inst = normalize_instance(make_instance(4, {{0, 1}, {1, 2}, {2, 3}}, {{0, 2}, {1, 3}}));
  CHECK(exact_opt_fixed_subset(inst, {}).has_value());
  CHECK(exact_opt_fixed_subset(inst, {}).value().size() == 0);
  const std::vector<int> one{0};
  const auto r = exact_opt_fixed_subset(inst, one);
  REQUIRE(r.has_value());
  CHECK(r->size() == 1);
  const std::vector<int> both{0, 1};
  CHECK_FALSE(exact_opt_fixed_subset(inst, both).has_value());
  const std::vector<int> bad{5};
  CHECK_THROWS_AS((void)exact_opt_fixed_subset(inst, bad), Error);
}

TEST_CASE("oracle: guard counts core nodes and pairs") {
  const Instance grid = gen_grid_gap(4).instance;
  CHECK(core_node_count(grid) == 32);
  CHECK_THROWS_AS((void)exact_opt(grid), GuardExceeded);
  std::vector<std::pair<int, int>> pairs(7, {0, 1});
  const Instance many = normalize_instance(make_instance(2, {{0, 1}}, pairs));
  CHECK(core_node_count(many) == 2);
  CHECK_THROWS_AS((void)exact_opt(many), GuardExceeded);
  CHECK(exact_opt(many, OracleGuard{.force = true}).value == 1);
}
