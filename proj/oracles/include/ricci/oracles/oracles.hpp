#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ricci/graph.hpp"
#include "ricci/transport.hpp"

// Independent reference solutions used by tests and the validation suite.
// Nothing here calls the curvature, transport or flow kernels.
namespace ricci::oracles {

class RegimeMismatch : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
class DegreeTooSmall : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
class SupportTooLarge : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Normalized flow on the path x - z - y with w_xz + w_yz = 1. The regime
// picks gamma: Constant = 1/x, Stable = x, Collapsing = 1/x^2.
enum class Path2Regime { Constant, Stable, Collapsing };

using Pair = std::array<double, 2>;  // (w_xz, w_yz)

// Constant and Stable are closed forms; Collapsing integrates the reduced
// system dw_xz/dt = w_yz - a_x, dw_yz/dt = w_xz - a_y with an adaptive
// Dormand-Prince stepper at tolerance 1e-10.
Pair path2_solution(Path2Regime regime, Pair w0, double t);

// Reduced-system mixing weights a_x, a_y = gamma(w_zx) / (gamma(w_zx) + gamma(w_zy)).
Pair path2_mixing(Path2Regime regime, Pair w);
// kappa_xz = 1 + a_x - a_y w_yz / w_xz, kappa_yz = 1 + a_y - a_x w_xz / w_yz
Pair path2_curvature(Path2Regime regime, Pair w);

// First time w_yz drops below `threshold` in the collapsing regime, found by
// dense output of the reference integration (bisection on the interpolant).
double path2_collapse_time(Pair w0, double threshold, double t_max = 1000.0);

// Unnormalized flow in the equal-weight regime: w(t) = w(0) e^{-t}. Throws
// RegimeMismatch for unequal initial weights.
Pair unnormalized_path2_solution(Pair w0, double t);

// [[-(1+a_x), a_y], [a_x, -(1+a_y)]]
std::array<std::array<double, 2>, 2> unnormalized_path2_matrix(double a_x);
// Closed form: the matrix always has eigenvalues -1 and -2 (ascending order).
Pair unnormalized_path2_eigenvalues();

// gamma = 1/x on a path: leaf edges 1, interior edges 0.
std::vector<double> path_curvature_expected(int edges);

struct StarExpectation {
  std::vector<double> kappa;
  std::vector<double> drift;  // F_e, valid when the weights sum to 1
  double fixed_point = 0.0;        // every weight 1/d
  double fixed_point_kappa = 0.0;  // 2/d
};

// gamma = 1/x on a star with d >= 3 leaves; weights[i] is edge (center, leaf i).
// kappa_ux = 1 + (2-d)/(w_ux D), F_ux = (d-2)/D (1/w_ux - d), D = sum 1/w.
StarExpectation star_expected(int d, const std::vector<double>& weights);

// Minimum over every spanning-tree basis of the bipartite transportation
// polytope. Both supports must have at most 4 points.
double transport_bruteforce(const TransportProblem& p);

// Generators. Weights default to [1, 2), which keeps every edge a shortest
// path (no edge can exceed a two-hop detour).
WeightedGraph random_connected_graph(int n, double extra_edge_probability, std::mt19937_64& rng, double w_lo = 1.0,
                                     double w_hi = 2.0);
WeightedGraph path_graph(const std::vector<double>& weights);
// Center 0, leaves 1..d.
WeightedGraph star_graph(const std::vector<double>& weights);
WeightedGraph unit_weight(const WeightedGraph& g);

// Positive weights summing to 1.
std::vector<double> random_simplex_point(int k, std::mt19937_64& rng, double floor = 0.02);

// Random balanced instance on a random connected graph with n <= 6 vertices;
// each side has 1..4 support points.
TransportProblem random_transport_problem(std::mt19937_64& rng);

}  // namespace ricci::oracles
