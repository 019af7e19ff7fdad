#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ricci/graph.hpp"
#include "ricci/transport.hpp"

namespace ricci {

// Reweighting applied to edge lengths before they become random-walk
// probabilities. Every member of the family is a power law, so curvature is
// invariant under a global rescaling of the weights.
class Gamma {
 public:
  enum class Kind { Reciprocal, Identity, ReciprocalSquare, Power };

  static Gamma reciprocal() { return Gamma(Kind::Reciprocal, -1.0); }
  static Gamma identity() { return Gamma(Kind::Identity, 1.0); }
  static Gamma reciprocal_square() { return Gamma(Kind::ReciprocalSquare, -2.0); }
  static Gamma power(double k);
  // "reciprocal" | "identity" | "reciprocal-square" | "power:k"
  static Gamma parse(const std::string& spec);

  Kind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  double operator()(double w) const;
  std::string name() const;

 private:
  Gamma(Kind kind, double exponent) : kind_(kind), exponent_(exponent) {}
  Kind kind_;
  double exponent_;
};

// mu_x^alpha: alpha at x, the rest spread over N(x) proportionally to gamma(w).
struct ProbMeasure {
  Vertex center = 0;
  double alpha = 0.0;
  std::vector<Mass> masses;  // sorted by vertex, zero entries omitted
};

ProbMeasure measure(const WeightedGraph& g, const Gamma& gamma, Vertex x, double alpha);

// 1 - W(mu_x^a, mu_y^a) / d(x, y)
double alpha_ricci(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma, Vertex x, Vertex y,
                   double alpha);

// Limit-free curvature via the Laplacian:
//   inf { (Lf(x) - Lf(y)) / d(x,y) : f 1-Lipschitz, f(y) - f(x) = d(x,y) }
// over f on the closed neighbourhoods of x and y. Requires w_xy = d(x,y);
// throws DistanceConditionViolated otherwise.
double lly_curvature_lp(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma, Vertex x, Vertex y);

// Same optimisation without the distance-condition check: the gauge uses the
// metric distance d(x,y) even if the edge is longer. Used for intermediate
// integrator stages, which are not states of the flow.
double lly_curvature_unchecked(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma, Vertex x,
                               Vertex y);

// Slope of kappa_alpha against (1 - alpha) through the origin. Cross-check
// only. Grid points must lie in [0.9, 1); throws NonLinearTail when the
// per-point ratios disagree with the slope by more than 1e-3.
double lly_curvature_extrapolated(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma, Vertex x,
                                  Vertex y, std::span<const double> alpha_grid);

struct CurvatureBounds {
  double generic_lower = 0.0;   // -2 D(G) / d(u,v)
  double coupling_lower = 0.0;  // value of the explicit *-coupling certificate
  double upper = 2.0;
  double lower() const { return coupling_lower > generic_lower ? coupling_lower : generic_lower; }
};

CurvatureBounds curvature_bounds(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma, Vertex u,
                                 Vertex v);

struct EdgeCurvature {
  Vertex u = 0;
  Vertex v = 0;
  double kappa = 0.0;
  CurvatureBounds bounds;
  std::vector<std::pair<double, double>> alpha_samples;  // (alpha, kappa_alpha)
};

struct CurvatureReport {
  std::vector<EdgeCurvature> edges;
};

// Curvature of every edge, edges distributed over OpenMP threads.
std::vector<double> edge_curvatures(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma,
                                    bool check_distance_condition = true);
// Single-threaded reference for edge_curvatures.
std::vector<double> edge_curvatures_serial(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma,
                                           bool check_distance_condition = true);

CurvatureReport curvature_report(const WeightedGraph& g, const Gamma& gamma, std::span<const double> alphas = {});

}  // namespace ricci
