#include <doctest.h>

#include <cmath>
#include <random>

#include "ricci/error.hpp"
#include "ricci/lp.hpp"
#include "ricci/oracles/oracles.hpp"
#include "ricci/transport.hpp"

using namespace ricci;

namespace {

// Sources 0,1 and sinks 2,3 with source-sink costs [[1,3],[2,5]]; the other
// pairs come from the shortest-path closure so the support carries a metric.
TransportProblem two_by_two() {
  auto g = WeightedGraph(4, {{0, 2, 1.0}, {0, 3, 3.0}, {1, 2, 2.0}, {1, 3, 5.0}});
  auto dm = all_pairs_distances(g);
  return TransportProblem::from_distances({{0, 0.4}, {1, 0.6}}, {{2, 0.7}, {3, 0.3}}, dm);
}

}  // namespace

TEST_CASE("solve_lp small programs") {
  LinearProgram a(1);
  a.set_objective(0, 1.0);
  a.add_row({{0, 1.0}}, Relation::GreaterEqual, 3.0);
  CHECK(solve_lp(a).optimum == doctest::Approx(3.0).epsilon(1e-12));

  LinearProgram b(2);
  b.set_objective(std::vector<double>{1.0, 1.0});
  b.add_row({{0, 1.0}, {1, 1.0}}, Relation::GreaterEqual, 1.0);
  auto sb = solve_lp(b);
  CHECK(sb.optimum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sb.argmin[0] + sb.argmin[1] == doctest::Approx(1.0));

  // K2 Lipschitz LP: f(x)=0, f(y)-f(x)=w, objective 2 f(y)/w
  const double w = 0.7;
  LinearProgram k2(2);
  k2.set_free(0);
  k2.set_free(1);
  k2.fix(0, 0.0);
  k2.add_row({{1, 1.0}, {0, -1.0}}, Relation::Equal, w);
  k2.set_objective(1, 2.0 / w);
  CHECK(solve_lp(k2).optimum == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("solve_lp reports infeasible and unbounded programs") {
  LinearProgram inf(1);
  inf.add_row({{0, 1.0}}, Relation::LessEqual, -1.0);
  CHECK_THROWS_AS(solve_lp(inf), Infeasible);

  LinearProgram unb(1);
  unb.set_objective(0, -1.0);
  CHECK_THROWS_AS(solve_lp(unb), Unbounded);

  LinearProgram fr(2);
  fr.set_free(0);
  fr.set_objective(0, 1.0);
  fr.add_row({{0, 1.0}, {1, 1.0}}, Relation::LessEqual, 1.0);
  CHECK_THROWS_AS(solve_lp(fr), Unbounded);
}

TEST_CASE("solve_lp handles equality, free and degenerate rows") {
  // minimize -x - y, x + y <= 1 (twice, degenerate), x - y = 0, y free
  LinearProgram lp(2);
  lp.set_free(1);
  lp.set_objective(std::vector<double>{-1.0, -1.0});
  lp.add_row({{0, 1.0}, {1, 1.0}}, Relation::LessEqual, 1.0);
  lp.add_row({{0, 2.0}, {1, 2.0}}, Relation::LessEqual, 2.0);
  lp.add_row({{0, 1.0}, {1, -1.0}}, Relation::Equal, 0.0);
  auto s = solve_lp(lp);
  CHECK(s.optimum == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(s.argmin[0] == doctest::Approx(0.5));
  CHECK(s.argmin[1] == doctest::Approx(0.5));
}

TEST_CASE("transport examples") {
  auto p = two_by_two();
  auto plan = min_cost_transport(p);
  CHECK(plan.cost == doctest::Approx(2.2).epsilon(1e-12));
  CHECK(w1_dual(p) == doctest::Approx(2.2).epsilon(1e-9));
  CHECK(oracles::transport_bruteforce(p) == doctest::Approx(2.2).epsilon(1e-12));

  auto line = parse_edge_list("0 1 0.5\n1 2 0.25");
  auto dm = all_pairs_distances(line);
  auto same = TransportProblem::from_distances({{1, 1.0}}, {{1, 1.0}}, dm);
  CHECK(min_cost_transport(same).cost == 0.0);
  CHECK(w1_dual(same) == doctest::Approx(0.0));
  auto points = TransportProblem::from_distances({{0, 1.0}}, {{2, 1.0}}, dm);
  CHECK(min_cost_transport(points).cost == doctest::Approx(0.75));
  CHECK(w1_dual(points) == doctest::Approx(0.75));
  CHECK(oracles::transport_bruteforce(points) == doctest::Approx(0.75));
}

TEST_CASE("transport rejects unbalanced measures") {
  auto line = parse_edge_list("0 1 1");
  auto dm = all_pairs_distances(line);
  CHECK_THROWS_AS(min_cost_transport(TransportProblem::from_distances({{0, 0.5}}, {{1, 1.0}}, dm)), Unbalanced);
  CHECK_THROWS_AS(w1_dual(TransportProblem::from_distances({{0, 1.0}}, {{1, 1.0 + 1e-9}}, dm)), Unbalanced);
  CHECK_THROWS_AS(
      min_cost_transport(TransportProblem::from_distances({{0, 1.5}, {1, -0.5}}, {{1, 1.0}}, dm)), Unbalanced);
}

TEST_CASE("random transport: primal, dual and brute force agree") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    auto p = oracles::random_transport_problem(rng);
    auto plan = min_cost_transport(p);
    CHECK(std::abs(plan.cost - oracles::transport_bruteforce(p)) <= 1e-10);
    CHECK(std::abs(plan.cost - w1_dual(p)) <= lp_tolerance::duality_gap);
    for (std::size_t i = 0; i < p.sources().size(); ++i) {
      double row = 0.0;
      for (double a : plan.coupling[i]) {
        CHECK(a >= 0.0);
        row += a;
      }
      CHECK(std::abs(row - p.sources()[i].mass) <= 1e-10);
    }
  }
}

TEST_CASE("brute force rejects large supports") {
  std::vector<Mass> five;
  for (int i = 0; i < 5; ++i) five.push_back({i, 0.2});
  auto g = oracles::path_graph({1, 1, 1, 1, 1});
  auto p = TransportProblem::from_distances(five, {{5, 1.0}}, all_pairs_distances(g));
  CHECK_THROWS_AS(oracles::transport_bruteforce(p), oracles::SupportTooLarge);
}
