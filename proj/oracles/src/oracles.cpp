#include "ricci/oracles/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/numeric/odeint.hpp>

namespace ricci::oracles {

namespace {

constexpr double kReferenceTolerance = 1e-10;

using State = std::array<double, 2>;

void collapsing_rhs(const State& w, State& dw, double) {
  const double s = w[0] * w[0] + w[1] * w[1];
  dw[0] = w[1] - w[1] * w[1] / s;
  dw[1] = w[0] - w[0] * w[0] / s;
}

auto reference_stepper() {
  namespace ode = boost::numeric::odeint;
  return ode::make_dense_output(kReferenceTolerance, kReferenceTolerance, ode::runge_kutta_dopri5<State>());
}

void require_simplex(Pair w0) {
  if (!(w0[0] > 0.0 && w0[1] > 0.0) || std::abs(w0[0] + w0[1] - 1.0) > 1e-12)
    throw std::invalid_argument("path-2 weights must be positive and sum to 1");
}

}  // namespace

Pair path2_mixing(Path2Regime regime, Pair w) {
  double gx = 0.0, gy = 0.0;
  switch (regime) {
    case Path2Regime::Constant:
      gx = 1.0 / w[0], gy = 1.0 / w[1];
      break;
    case Path2Regime::Stable:
      gx = w[0], gy = w[1];
      break;
    case Path2Regime::Collapsing:
      gx = 1.0 / (w[0] * w[0]), gy = 1.0 / (w[1] * w[1]);
      break;
  }
  return {gx / (gx + gy), gy / (gx + gy)};
}

Pair path2_curvature(Path2Regime regime, Pair w) {
  auto [ax, ay] = path2_mixing(regime, w);
  return {1.0 + ax - ay * w[1] / w[0], 1.0 + ay - ax * w[0] / w[1]};
}

Pair path2_solution(Path2Regime regime, Pair w0, double t) {
  require_simplex(w0);
  if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
  switch (regime) {
    case Path2Regime::Constant:
      return w0;
    case Path2Regime::Stable: {
      const double decay = std::exp(-2.0 * t);
      return {0.5 - (0.5 - w0[0]) * decay, 0.5 - (0.5 - w0[1]) * decay};
    }
    case Path2Regime::Collapsing: {
      State w = w0;
      if (t > 0.0)
        boost::numeric::odeint::integrate_adaptive(reference_stepper(), collapsing_rhs, w, 0.0, t, 1e-3);
      return w;
    }
  }
  return w0;
}

double path2_collapse_time(Pair w0, double threshold, double t_max) {
  require_simplex(w0);
  if (w0[1] < threshold) return 0.0;
  auto stepper = reference_stepper();
  stepper.initialize(State(w0), 0.0, 1e-3);
  while (stepper.current_time() < t_max) {
    stepper.do_step(collapsing_rhs);
    if (stepper.current_state()[1] < threshold) {
      double lo = stepper.previous_time(), hi = stepper.current_time();
      State probe;
      for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        stepper.calc_state(mid, probe);
        (probe[1] < threshold ? hi : lo) = mid;
      }
      return hi;
    }
  }
  throw std::runtime_error("w_yz did not cross the threshold before t_max");
}

Pair unnormalized_path2_solution(Pair w0, double t) {
  if (w0[0] != w0[1])
    throw RegimeMismatch("closed form covers equal initial weights only (c2 = 0 branch)");
  const double decay = std::exp(-t);
  return {w0[0] * decay, w0[1] * decay};
}

std::array<std::array<double, 2>, 2> unnormalized_path2_matrix(double a_x) {
  const double a_y = 1.0 - a_x;
  return {{{-(1.0 + a_x), a_y}, {a_x, -(1.0 + a_y)}}};
}

Pair unnormalized_path2_eigenvalues() { return {-2.0, -1.0}; }

std::vector<double> path_curvature_expected(int edges) {
  if (edges < 1) throw std::invalid_argument("path needs at least one edge");
  if (edges == 1) return {2.0};  // K2
  std::vector<double> k(static_cast<std::size_t>(edges), 0.0);
  k.front() = k.back() = 1.0;
  return k;
}

StarExpectation star_expected(int d, const std::vector<double>& weights) {
  if (d < 3) throw DegreeTooSmall("star needs at least three leaves, got " + std::to_string(d));
  if (static_cast<int>(weights.size()) != d) throw std::invalid_argument("one weight per leaf expected");
  double D = 0.0;
  for (double w : weights) D += 1.0 / w;
  StarExpectation s;
  for (double w : weights) {
    s.kappa.push_back(1.0 + (2.0 - d) / (w * D));
    s.drift.push_back((d - 2.0) / D * (1.0 / w - d));
  }
  s.fixed_point = 1.0 / d;
  s.fixed_point_kappa = 2.0 / d;
  return s;
}

double transport_bruteforce(const TransportProblem& p) {
  const std::size_t m = p.sources().size(), k = p.sinks().size();
  if (m > 4 || k > 4) throw SupportTooLarge("brute force supports at most 4 points per side");
  if (m == 0 || k == 0) throw std::invalid_argument("empty measure");
  const std::size_t cells = m * k, basis = m + k - 1;

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> choose(cells, 0);
  std::fill(choose.end() - static_cast<std::ptrdiff_t>(basis), choose.end(), 1);
  do {
    std::vector<std::size_t> chosen;
    for (std::size_t c = 0; c < cells; ++c)
      if (choose[c]) chosen.push_back(c);

    // Spanning tree check on rows 0..m-1 and columns m..m+k-1.
    std::vector<std::size_t> parent(m + k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool tree = true;
    for (std::size_t c : chosen) {
      std::size_t a = find(c / k), b = find(m + c % k);
      if (a == b) {
        tree = false;
        break;
      }
      parent[a] = b;
    }
    if (!tree) continue;

    // Leaf peeling: a row or column with one unresolved cell fixes that cell.
    std::vector<double> rest(m + k);
    for (std::size_t i = 0; i < m; ++i) rest[i] = p.sources()[i].mass;
    for (std::size_t j = 0; j < k; ++j) rest[m + j] = p.sinks()[j].mass;
    std::vector<double> flow(cells, 0.0);
    std::vector<bool> done(cells, false);
    for (std::size_t solved = 0; solved < basis;) {
      bool progress = false;
      for (std::size_t node = 0; node < m + k && solved < basis; ++node) {
        std::size_t open = 0, last = 0;
        for (std::size_t c : chosen)
          if (!done[c] && (node < m ? c / k == node : c % k == node - m)) ++open, last = c;
        if (open != 1) continue;
        flow[last] = rest[node];
        done[last] = true;
        rest[last / k] -= flow[last];
        rest[m + last % k] -= flow[last];
        ++solved;
        progress = true;
      }
      if (!progress) break;
    }
    bool feasible = true;
    double cost = 0.0;
    for (std::size_t c : chosen) {
      if (flow[c] < -1e-12) feasible = false;
      cost += flow[c] * p.cost(c / k, c % k);
    }
    if (feasible) best = std::min(best, cost);
  } while (std::next_permutation(choose.begin(), choose.end()));
  return best;
}

WeightedGraph random_connected_graph(int n, double extra_edge_probability, std::mt19937_64& rng, double w_lo,
                                     double w_hi) {
  if (n < 2) throw std::invalid_argument("need at least two vertices");
  std::uniform_real_distribution<double> weight(w_lo, w_hi), coin(0.0, 1.0);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<bool>> used(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  std::vector<Edge> edges;
  auto add = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    used[a][b] = true;
    edges.push_back({a, b, weight(rng)});
  };
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    add(order[i], order[pick(rng)]);
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (!used[a][b] && coin(rng) < extra_edge_probability) add(a, b);
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph path_graph(const std::vector<double>& weights) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < weights.size(); ++i)
    edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(i + 1), weights[i]});
  return WeightedGraph(static_cast<int>(weights.size()) + 1, std::move(edges));
}

WeightedGraph star_graph(const std::vector<double>& weights) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < weights.size(); ++i) edges.push_back({0, static_cast<Vertex>(i + 1), weights[i]});
  return WeightedGraph(static_cast<int>(weights.size()) + 1, std::move(edges));
}

WeightedGraph unit_weight(const WeightedGraph& g) {
  std::vector<double> ones(g.edge_count(), 1.0);
  return g.with_weights(ones);
}

std::vector<double> random_simplex_point(int k, std::mt19937_64& rng, double floor) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  std::vector<double> w(static_cast<std::size_t>(k));
  double s = 0.0;
  for (double& x : w) s += (x = u(rng));
  for (double& x : w) x /= s;
  // Put the rounding residue on the largest entry so the sum is 1 to the last ulp.
  auto big = std::max_element(w.begin(), w.end());
  *big += 1.0 - std::accumulate(w.begin(), w.end(), 0.0);
  return w;
}

TransportProblem random_transport_problem(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(2, 6);
  const int n = size(rng);
  auto g = random_connected_graph(n, 0.4, rng, 0.1, 2.0);
  auto dm = all_pairs_distances_serial(g);
  auto side = [&]() {
    std::uniform_int_distribution<int> count(1, std::min(4, n));
    std::vector<Vertex> vs(static_cast<std::size_t>(n));
    std::iota(vs.begin(), vs.end(), 0);
    std::shuffle(vs.begin(), vs.end(), rng);
    vs.resize(static_cast<std::size_t>(count(rng)));
    std::sort(vs.begin(), vs.end());
    auto mass = random_simplex_point(static_cast<int>(vs.size()), rng);
    std::vector<Mass> out;
    for (std::size_t i = 0; i < vs.size(); ++i) out.push_back({vs[i], mass[i]});
    return out;
  };
  auto sources = side();
  auto sinks = side();
  return TransportProblem::from_distances(std::move(sources), std::move(sinks), dm);
}

}  // namespace ricci::oracles
