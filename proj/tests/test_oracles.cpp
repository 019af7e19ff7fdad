#include <doctest.h>

#include <cmath>
#include <random>

#include "ricci/oracles/oracles.hpp"

using namespace ricci;
namespace orc = ricci::oracles;

TEST_CASE("path-2 regimes") {
  auto c = orc::path2_solution(orc::Path2Regime::Constant, {0.3, 0.7}, 100.0);
  CHECK(c[0] == 0.3);
  CHECK(c[1] == 0.7);

  auto s = orc::path2_solution(orc::Path2Regime::Stable, {0.2, 0.8}, 50.0);
  CHECK(s[0] == doctest::Approx(0.5));
  CHECK(s[1] == doctest::Approx(0.5));

  auto k = orc::path2_solution(orc::Path2Regime::Collapsing, {0.6, 0.4}, 15.0);
  CHECK(k[0] > 0.99999);
  CHECK(k[1] < 1e-5);
  CHECK(k[0] + k[1] == doctest::Approx(1.0).epsilon(1e-8));
  auto kappa = orc::path2_curvature(orc::Path2Regime::Collapsing, k);
  CHECK(kappa[1] == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(kappa[0] == doctest::Approx(1.0).epsilon(1e-4));

  // w_yz decreases monotonically and the crossing time is consistent
  double prev = 0.4;
  for (double t = 0.5; t <= 10; t += 0.5) {
    auto w = orc::path2_solution(orc::Path2Regime::Collapsing, {0.6, 0.4}, t);
    CHECK(w[1] < prev);
    prev = w[1];
  }
  const double tc = orc::path2_collapse_time({0.6, 0.4}, 1e-3);
  CHECK(orc::path2_solution(orc::Path2Regime::Collapsing, {0.6, 0.4}, tc)[1] == doctest::Approx(1e-3).epsilon(1e-6));
  CHECK_THROWS(orc::path2_solution(orc::Path2Regime::Stable, {0.2, 0.7}, 1.0));
}

TEST_CASE("unnormalized path-2") {
  auto w = orc::unnormalized_path2_solution({0.5, 0.5}, 1.0);
  CHECK(w[0] == doctest::Approx(0.5 * std::exp(-1.0)));
  auto w0 = orc::unnormalized_path2_solution({0.5, 0.5}, 0.0);
  CHECK(w0[0] == 0.5);
  CHECK_THROWS_AS(orc::unnormalized_path2_solution({0.3, 0.7}, 1.0), orc::RegimeMismatch);
  auto m = orc::unnormalized_path2_matrix(0.3);
  // trace -3 and determinant 2 give eigenvalues -1, -2
  CHECK(m[0][0] + m[1][1] == doctest::Approx(-3.0));
  CHECK(m[0][0] * m[1][1] - m[0][1] * m[1][0] == doctest::Approx(2.0));
}

TEST_CASE("path and star closed forms") {
  CHECK(orc::path_curvature_expected(6) == std::vector<double>{1, 0, 0, 0, 0, 1});
  CHECK(orc::path_curvature_expected(2) == std::vector<double>{1, 1});

  auto even = orc::star_expected(3, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  for (int i = 0; i < 3; ++i) {
    CHECK(even.kappa[i] == doctest::Approx(2.0 / 3));
    CHECK(even.drift[i] == doctest::Approx(0.0).epsilon(1e-15));
  }
  CHECK(even.fixed_point_kappa == doctest::Approx(2.0 / 3));

  std::vector<double> w = {0.5, 0.3, 0.2};
  auto star = orc::star_expected(3, w);
  CHECK(star.drift[0] == doctest::Approx(-3.0 / 31));
  CHECK(star.drift[1] == doctest::Approx(1.0 / 31));
  CHECK(star.drift[2] == doctest::Approx(6.0 / 31));
  double mean = 0.0;
  for (int i = 0; i < 3; ++i) mean += star.kappa[i] * w[i];
  for (int i = 0; i < 3; ++i) CHECK(mean - star.kappa[i] == doctest::Approx(star.drift[i]));
  CHECK_THROWS_AS(orc::star_expected(2, {0.5, 0.5}), orc::DegreeTooSmall);
}

TEST_CASE("brute-force transport") {
  auto g = WeightedGraph(4, {{0, 2, 1.0}, {0, 3, 3.0}, {1, 2, 2.0}, {1, 3, 5.0}});
  auto dm = all_pairs_distances(g);
  auto p = TransportProblem::from_distances({{0, 0.4}, {1, 0.6}}, {{2, 0.7}, {3, 0.3}}, dm);
  CHECK(orc::transport_bruteforce(p) == doctest::Approx(2.2));
  auto point = TransportProblem::from_distances({{0, 1.0}}, {{3, 1.0}}, dm);
  CHECK(orc::transport_bruteforce(point) == doctest::Approx(3.0));
  // symmetric 2x2 with cheap diagonal
  auto sq = WeightedGraph(4, {{0, 2, 1.0}, {1, 3, 1.0}, {0, 3, 4.0}, {1, 2, 4.0}});
  auto sdm = all_pairs_distances(sq);
  auto diag = TransportProblem::from_distances({{0, 0.5}, {1, 0.5}}, {{2, 0.5}, {3, 0.5}}, sdm);
  CHECK(orc::transport_bruteforce(diag) == doctest::Approx(1.0));
}

TEST_CASE("generators") {
  std::mt19937_64 rng(1);
  for (int n = 2; n <= 10; ++n) {
    auto g = orc::random_connected_graph(n, 0.3, rng);
    CHECK(g.vertex_count() == n);
    auto dm = all_pairs_distances(g);
    for (const auto& e : g.edges()) CHECK(dm(e.u, e.v) == e.w);
  }
  auto w = orc::random_simplex_point(7, rng);
  double s = 0.0;
  for (double x : w) s += x;
  CHECK(std::abs(s - 1.0) <= 1e-15);
}
