#include <random>

#include "brute.hpp"
#include "djp/fvs.hpp"
#include "doctest.h"

using namespace djp;
using djp::test::make_graph;

TEST_CASE("fvs: forest needs nothing") {
  const Graph g = make_graph(5, {{0, 1}, {1, 2}, {3, 4}});
  const auto exact = fvs_exact(g, 0);
  REQUIRE(exact);
  CHECK(exact->size() == 0);
  CHECK(fvs_approx2(g).size() == 0);
}

TEST_CASE("fvs: a cycle needs one node") {
  const Graph c5 = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  CHECK_FALSE(fvs_exact(c5, 0));
  const auto exact = fvs_exact(c5, 1);
  REQUIRE(exact);
  CHECK(exact->size() == 1);
  CHECK(exact->is_exact);
  CHECK(fvs_approx2(c5).size() <= 2);
  CHECK(is_feedback_vertex_set(c5, fvs_approx2(c5).nodes));
}

TEST_CASE("fvs: K4 needs two nodes") {
  const Graph k4 = make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  for (NodeId v = 0; v < 4; ++v) CHECK_FALSE(djp::test::acyclic_without(k4, {v}));
  CHECK_FALSE(fvs_exact(k4, 1));
  const auto exact = fvs_exact(k4, 4);
  REQUIRE(exact);
  CHECK(exact->size() == 2);
  CHECK(djp::test::acyclic_without(k4, exact->nodes));
}

TEST_CASE("fvs: loops and parallel edges") {
  const Graph g = make_graph(3, {{0, 0}, {1, 2}, {1, 2}});
  const auto exact = fvs_exact(g, 3);
  REQUIRE(exact);
  CHECK(exact->size() == 2);
  CHECK(exact->nodes[0] == 0);
  CHECK(is_feedback_vertex_set(g, exact->nodes));
}

TEST_CASE("fvs: random graphs against subset enumeration") {
  std::mt19937_64 rng(2024);
  for (int it = 0; it < 50; ++it) {
    const int n = 5 + it % 10;
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<std::pair<int, int>> edges;
    const int m = n + it % 9;
    for (int j = 0; j < m; ++j) {
      const int a = pick(rng), b = pick(rng);
      if (a != b) edges.emplace_back(a, b);
    }
    const Graph g = make_graph(n, edges);
    const int opt = djp::test::brute_fvs_size(g);
    const auto exact = fvs_exact(g, n);
    REQUIRE(exact);
    CHECK(exact->size() == opt);
    CHECK(djp::test::acyclic_without(g, exact->nodes));
    const FeedbackVertexSet approx = fvs_approx2(g);
    CHECK(approx.size() <= 2 * opt);
    CHECK(djp::test::acyclic_without(g, approx.nodes));
    const FeedbackVertexSet autos = fvs_auto(g, 12);
    CHECK(autos.size() == opt);
    CHECK(autos.is_exact);
  }
}

TEST_CASE("fvs: auto falls back to the approximation past the limit") {
  const Graph k4 = make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  const FeedbackVertexSet f = fvs_auto(k4, 1);
  CHECK_FALSE(f.is_exact);
  CHECK(djp::test::acyclic_without(k4, f.nodes));
}
