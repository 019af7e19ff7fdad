#include "ricci/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <stdexcept>

#include "ricci/error.hpp"
#include "ricci/lp.hpp"

namespace ricci {

namespace {

constexpr double kDistanceConditionSlack = 1e-12;
constexpr double kTailResidual = 1e-3;

void require_edge(const WeightedGraph& g, Vertex x, Vertex y) {
  if (!g.find_edge(x, y))
    throw std::invalid_argument("(" + std::to_string(x) + "," + std::to_string(y) + ") is not an edge");
}

// Transition probabilities gamma(w_xz) / D_x over N(x), aligned with g.neighbors(x).
std::vector<double> transition(const WeightedGraph& g, const Gamma& gamma, Vertex x) {
  auto nbrs = g.neighbors(x);
  std::vector<double> p(nbrs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    p[i] = gamma(g.edge(nbrs[i].edge).w);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

double laplacian_lp(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma, Vertex x, Vertex y) {
  const double d = dm(x, y);
  auto nx = g.neighbors(x);
  auto ny = g.neighbors(y);
  auto px = transition(g, gamma, x);
  auto py = transition(g, gamma, y);

  // Free vertices: N(x) u N(y) minus {x, y}. coef[z] = p_x(z) - p_y(z).
  std::vector<Vertex> free;
  for (const auto& inc : nx)
    if (inc.to != y) free.push_back(inc.to);
  for (const auto& inc : ny)
    if (inc.to != x) free.push_back(inc.to);
  std::sort(free.begin(), free.end());
  free.erase(std::unique(free.begin(), free.end()), free.end());
  const std::size_t n = free.size();

  auto slot = [&](Vertex v) {
    return static_cast<std::size_t>(std::lower_bound(free.begin(), free.end(), v) - free.begin());
  };
  std::vector<double> coef(n, 0.0);
  double coef_y = 0.0;  // multiplies f(y) = d; f(x) = 0 contributes nothing
  for (std::size_t i = 0; i < nx.size(); ++i) {
    if (nx[i].to == y)
      coef_y += px[i];
    else
      coef[slot(nx[i].to)] += px[i];
  }
  for (std::size_t i = 0; i < ny.size(); ++i)
    if (ny[i].to != x) coef[slot(ny[i].to)] -= py[i];

  // Shift f = floor + g with floor(z) = max(-d(x,z), d - d(y,z)), the
  // pointwise smallest value any feasible f can take. floor is itself
  // 1-Lipschitz, so g = 0 is feasible and every row has a nonnegative bound.
  std::vector<double> floor(n);
  for (std::size_t i = 0; i < n; ++i) floor[i] = std::max(-dm(x, free[i]), d - dm(y, free[i]));

  double constant = coef_y * d + d;  // Lf(x) - Lf(y) contributions at the fixed points
  for (std::size_t i = 0; i < n; ++i) constant += coef[i] * floor[i];
  if (n == 0) return constant / d;

  LinearProgram lp(n);
  for (std::size_t i = 0; i < n; ++i) lp.set_objective(i, coef[i] / d);
  std::vector<double> row(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    row.assign(n, 0.0);
    row[a] = 1.0;
    lp.add_row(row, Relation::LessEqual, std::max(0.0, dm(free[a], x) - floor[a]));
    lp.add_row(row, Relation::LessEqual, std::max(0.0, dm(free[a], y) + d - floor[a]));
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      row.assign(n, 0.0);
      row[a] = 1.0;
      row[b] = -1.0;
      lp.add_row(row, Relation::LessEqual, std::max(0.0, dm(free[a], free[b]) - floor[a] + floor[b]));
    }
  }
  return constant / d + solve_lp(lp).optimum;
}

void check_distance_condition(const WeightedGraph& g, const DistanceMatrix& dm, Vertex x, Vertex y) {
  const double w = g.weight(x, y);
  if (w - dm(x, y) > kDistanceConditionSlack)
    throw DistanceConditionViolated("edge (" + std::to_string(x) + "," + std::to_string(y) + ") has weight " +
                                    std::to_string(w) + " but distance " + std::to_string(dm(x, y)));
}

}  // namespace

Gamma Gamma::power(double k) {
  if (k == 0.0 || !std::isfinite(k)) throw std::invalid_argument("gamma exponent must be finite and nonzero");
  return Gamma(Kind::Power, k);
}

Gamma Gamma::parse(const std::string& spec) {
  if (spec == "reciprocal") return reciprocal();
  if (spec == "identity") return identity();
  if (spec == "reciprocal-square") return reciprocal_square();
  if (spec.rfind("power:", 0) == 0) {
    std::size_t pos = 0;
    double k = 0.0;
    try {
      k = std::stod(spec.substr(6), &pos);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("bad gamma exponent in '" + spec + "'");
    }
    if (pos != spec.size() - 6) throw std::invalid_argument("bad gamma exponent in '" + spec + "'");
    return power(k);
  }
  throw std::invalid_argument("unknown gamma '" + spec + "'");
}

double Gamma::operator()(double w) const {
  switch (kind_) {
    case Kind::Reciprocal:
      return 1.0 / w;
    case Kind::Identity:
      return w;
    case Kind::ReciprocalSquare:
      return 1.0 / (w * w);
    case Kind::Power:
      return std::pow(w, exponent_);
  }
  return 0.0;
}

std::string Gamma::name() const {
  switch (kind_) {
    case Kind::Reciprocal:
      return "reciprocal";
    case Kind::Identity:
      return "identity";
    case Kind::ReciprocalSquare:
      return "reciprocal-square";
    case Kind::Power: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "power:%g", exponent_);
      return buf;
    }
  }
  return {};
}

ProbMeasure measure(const WeightedGraph& g, const Gamma& gamma, Vertex x, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("idleness must lie in [0, 1]");
  if (!g.alive(x)) throw std::invalid_argument("vertex " + std::to_string(x) + " is not in the graph");
  ProbMeasure mu;
  mu.center = x;
  mu.alpha = alpha;
  auto nbrs = g.neighbors(x);
  auto p = transition(g, gamma, x);
  bool placed_center = false;
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    if (!placed_center && nbrs[i].to > x) {
      if (alpha > 0.0) mu.masses.push_back({x, alpha});
      placed_center = true;
    }
    const double m = (1.0 - alpha) * p[i];
    if (m > 0.0) mu.masses.push_back({nbrs[i].to, m});
  }
  if (!placed_center && alpha > 0.0) mu.masses.push_back({x, alpha});
  return mu;
}

double alpha_ricci(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma, Vertex x, Vertex y,
                   double alpha) {
  require_edge(g, x, y);
  auto mx = measure(g, gamma, x, alpha);
  auto my = measure(g, gamma, y, alpha);
  auto problem = TransportProblem::from_distances(mx.masses, my.masses, dm);
  return 1.0 - min_cost_transport(problem).cost / dm(x, y);
}

double lly_curvature_lp(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma, Vertex x, Vertex y) {
  require_edge(g, x, y);
  check_distance_condition(g, dm, x, y);
  return laplacian_lp(g, dm, gamma, x, y);
}

double lly_curvature_unchecked(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma, Vertex x,
                               Vertex y) {
  require_edge(g, x, y);
  return laplacian_lp(g, dm, gamma, x, y);
}

double lly_curvature_extrapolated(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma, Vertex x,
                                  Vertex y, std::span<const double> alpha_grid) {
  if (alpha_grid.size() < 3) throw std::invalid_argument("extrapolation needs at least three idleness values");
  for (double a : alpha_grid)
    if (!(a >= 0.9 && a < 1.0)) throw std::invalid_argument("extrapolation grid must lie in [0.9, 1)");
  std::vector<double> eps(alpha_grid.size()), kappa(alpha_grid.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    eps[i] = 1.0 - alpha_grid[i];
    kappa[i] = alpha_ricci(g, dm, gamma, x, y, alpha_grid[i]);
    num += kappa[i] * eps[i];
    den += eps[i] * eps[i];
  }
  const double slope = num / den;
  double residual = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) residual = std::max(residual, std::abs(kappa[i] / eps[i] - slope));
  if (residual > kTailResidual)
    throw NonLinearTail("kappa_alpha is not linear on the grid (residual " + std::to_string(residual) + ")");
  return slope;
}

CurvatureBounds curvature_bounds(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma, Vertex u,
                                 Vertex v) {
  require_edge(g, u, v);
  const double d = dm(u, v);
  CurvatureBounds b;
  b.generic_lower = -2.0 * g.max_weight() / d;

  // B(u,v) = 2, B(x,v) = -mu_u(x) for x in N(u)\v, B(u,y) = -mu_v(y) for
  // y in N(v)\u; the diagonal entries B(u,u), B(v,v) cost nothing.
  double value = 2.0 * d;
  auto nu = g.neighbors(u);
  auto pu = transition(g, gamma, u);
  for (std::size_t i = 0; i < nu.size(); ++i)
    if (nu[i].to != v) value -= pu[i] * dm(nu[i].to, v);
  auto nv = g.neighbors(v);
  auto pv = transition(g, gamma, v);
  for (std::size_t i = 0; i < nv.size(); ++i)
    if (nv[i].to != u) value -= pv[i] * dm(u, nv[i].to);
  b.coupling_lower = value / d;
  return b;
}

namespace {

double edge_kappa(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma, std::size_t i, bool check) {
  const Edge& e = g.edge(i);
  return check ? lly_curvature_lp(g, dm, gamma, e.u, e.v) : lly_curvature_unchecked(g, dm, gamma, e.u, e.v);
}

}  // namespace

std::vector<double> edge_curvatures(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma,
                                    bool check_distance_condition) {
  const long m = static_cast<long>(g.edge_count());
  std::vector<double> kappa(static_cast<std::size_t>(m), 0.0);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(dynamic) if (m >= 16)
  for (long i = 0; i < m; ++i) {
    try {
      kappa[i] = edge_kappa(g, dm, gamma, static_cast<std::size_t>(i), check_distance_condition);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  // lowest edge index wins, so the reported error does not depend on scheduling
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return kappa;
}

std::vector<double> edge_curvatures_serial(const WeightedGraph& g, const DistanceMatrix& dm, const Gamma& gamma,
                                           bool check_distance_condition) {
  std::vector<double> kappa(g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) kappa[i] = edge_kappa(g, dm, gamma, i, check_distance_condition);
  return kappa;
}

CurvatureReport curvature_report(const WeightedGraph& g, const Gamma& gamma, std::span<const double> alphas) {
  auto dm = all_pairs_distances(g);
  auto kappa = edge_curvatures(g, dm, gamma);
  CurvatureReport report;
  report.edges.reserve(g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edge(i);
    EdgeCurvature ec;
    ec.u = e.u;
    ec.v = e.v;
    ec.kappa = kappa[i];
    ec.bounds = curvature_bounds(g, dm, gamma, e.u, e.v);
    for (double a : alphas) ec.alpha_samples.emplace_back(a, alpha_ricci(g, dm, gamma, e.u, e.v, a));
    report.edges.push_back(std::move(ec));
  }
  return report;
}

}  // namespace ricci
