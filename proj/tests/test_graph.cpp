#include <doctest.h>

#include <random>
#include <sstream>

#include "ricci/error.hpp"
#include "ricci/graph.hpp"
#include "ricci/oracles/oracles.hpp"

using namespace ricci;

TEST_CASE("load edge lists") {
  auto g = parse_edge_list("0 1 0.3\n1 2 0.7");
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.weight(1, 0) == doctest::Approx(0.3));
  CHECK(g.degree(1) == 2);

  auto k2 = parse_edge_list("0 1 1.0");
  CHECK(k2.edge_count() == 1);

  CHECK_THROWS_AS(parse_edge_list("0 1 0.5\n2 3 0.5"), DisconnectedGraph);
  CHECK_THROWS_AS(parse_edge_list("0 1 0\n"), NonPositiveWeight);
  CHECK_THROWS_AS(parse_edge_list("0 1 -1\n"), NonPositiveWeight);
  CHECK_THROWS_AS(parse_edge_list("0 1 x\n"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("0 0 1\n"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("0 1 1\n1 0 2\n"), ParseError);
}

TEST_CASE("comments and blank lines are skipped") {
  auto g = parse_edge_list("# header\n\n0 1 0.5  # trailing\n1 2 0.5\n");
  CHECK(g.edge_count() == 2);
}

TEST_CASE("JSON graphs round-trip") {
  auto g = parse_graph_json(R"({"vertices":3,"edges":[{"u":2,"v":1,"w":0.25},{"u":0,"v":1,"w":0.75}]})");
  CHECK(g.edge(0).u == 0);
  CHECK(g.edge(1).u == 1);
  CHECK(g.edge(1).v == 2);
  auto again = parse_graph_json(graph_to_json(g));
  REQUIRE(again.edge_count() == g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) CHECK(again.edge(i).w == g.edge(i).w);
  CHECK_THROWS_AS(parse_graph_json("{"), ParseError);
  CHECK_THROWS_AS(parse_graph_json(R"({"vertices":2})"), ParseError);
}

TEST_CASE("shortest paths") {
  auto path = parse_edge_list("0 1 0.3\n1 2 0.7");
  auto dm = all_pairs_distances(path);
  CHECK(dm(0, 2) == doctest::Approx(1.0));
  CHECK(dm(2, 0) == doctest::Approx(1.0));
  CHECK(dm(1, 1) == 0.0);

  auto tri = parse_edge_list("0 1 0.2\n1 2 0.2\n0 2 0.9");
  CHECK(all_pairs_distances(tri)(0, 2) == doctest::Approx(0.4));

  CHECK(all_pairs_distances(parse_edge_list("0 1 0.4"))(0, 1) == doctest::Approx(0.4));
}

TEST_CASE("distance matrix is a metric dominated by edge weights") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    auto g = oracles::random_connected_graph(2 + rep % 9, 0.4, rng, 0.1, 3.0);
    auto dm = all_pairs_distances(g);
    auto vs = g.vertices();
    for (auto a : vs)
      for (auto b : vs) {
        CHECK(dm(a, b) == dm(b, a));
        for (auto c : vs) CHECK(dm(a, b) <= dm(a, c) + dm(c, b) + 1e-12);
      }
    for (const auto& e : g.edges()) CHECK(dm(e.u, e.v) <= e.w);
  }
}

TEST_CASE("parallel and serial all-pairs agree") {
  std::mt19937_64 rng(11);
  auto g = oracles::random_connected_graph(120, 0.05, rng, 0.1, 2.0);
  auto a = all_pairs_distances(g);
  auto b = all_pairs_distances_serial(g);
  for (int i = 0; i < 120; ++i)
    for (int j = 0; j < 120; ++j) REQUIRE(a(i, j) == b(i, j));
}

TEST_CASE("delete_edge refuses bridges") {
  auto tri = parse_edge_list("0 1 0.2\n1 2 0.2\n0 2 0.6");
  auto path = delete_edge(tri, 2, 0);
  CHECK(path.edge_count() == 2);
  CHECK_FALSE(path.find_edge(0, 2).has_value());
  CHECK_THROWS_AS(delete_edge(path, 0, 1), WouldDisconnect);
  CHECK_THROWS(delete_edge(path, 0, 2));
}

TEST_CASE("contract_edge merges neighbourhoods") {
  // square 0-1-2-3-0 with diagonal 0-2
  auto g = parse_edge_list("0 1 1\n1 2 2\n2 3 3\n0 3 4\n0 2 5");
  auto c = contract_edge(g, 0, 1, MergeMap(g.vertex_slots()));
  CHECK_FALSE(c.graph.alive(1));
  CHECK(c.graph.vertex_count() == 3);
  // 1-2 (2) collides with 0-2 (5): shorter survives
  CHECK(c.graph.weight(0, 2) == 2.0);
  CHECK(c.graph.weight(0, 3) == 4.0);
  CHECK(c.graph.edge_count() == 3);
  CHECK(c.merges.representative(1) == 0);
  CHECK(c.merges.representative(2) == 2);

  auto c2 = contract_edge(c.graph, 2, 0, c.merges);
  CHECK(c2.merges.representative(1) == 2);
  CHECK(c2.merges.representative(0) == 2);
  CHECK(c2.graph.edge_count() == 1);
  CHECK(c2.graph.weight(2, 3) == 3.0);
}

TEST_CASE("merge map") {
  MergeMap m(5);
  m.merge(1, 0);
  m.merge(2, 1);
  m.merge(2, 4);
  CHECK(m.representative(0) == 2);
  CHECK(m.representative(4) == 2);
  CHECK(m.representative(3) == 3);
  CHECK(m.representative(m.representative(0)) == m.representative(0));
}
