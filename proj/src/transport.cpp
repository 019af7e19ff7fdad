#include "ricci/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ricci/error.hpp"
#include "ricci/lp.hpp"

namespace ricci {

namespace {

constexpr double kMassSumTolerance = 1e-12;
constexpr double kFlowEps = 1e-15;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TransportProblem::TransportProblem(std::vector<Mass> sources, std::vector<Mass> sinks, std::vector<Vertex> support,
                                   std::vector<double> metric)
    : sources_(std::move(sources)), sinks_(std::move(sinks)), support_(std::move(support)), metric_(std::move(metric)) {
  if (!std::is_sorted(support_.begin(), support_.end()) ||
      std::adjacent_find(support_.begin(), support_.end()) != support_.end())
    throw std::invalid_argument("support must be sorted and unique");
  if (metric_.size() != support_.size() * support_.size()) throw std::invalid_argument("metric size mismatch");
  cost_.resize(sources_.size() * sinks_.size());
  for (std::size_t i = 0; i < sources_.size(); ++i)
    for (std::size_t j = 0; j < sinks_.size(); ++j) {
      double c = distance(sources_[i].vertex, sinks_[j].vertex);
      if (!std::isfinite(c)) throw std::invalid_argument("transport cost is not finite");
      cost_[i * sinks_.size() + j] = c;
    }
}

TransportProblem TransportProblem::from_distances(std::vector<Mass> sources, std::vector<Mass> sinks,
                                                  const DistanceMatrix& dm) {
  std::vector<Vertex> support;
  for (const auto& m : sources) support.push_back(m.vertex);
  for (const auto& m : sinks) support.push_back(m.vertex);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  std::vector<double> metric(support.size() * support.size());
  for (std::size_t a = 0; a < support.size(); ++a)
    for (std::size_t b = 0; b < support.size(); ++b) metric[a * support.size() + b] = dm(support[a], support[b]);
  return TransportProblem(std::move(sources), std::move(sinks), std::move(support), std::move(metric));
}

std::size_t TransportProblem::index_of(Vertex v) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), v);
  if (it == support_.end() || *it != v) throw std::out_of_range("vertex " + std::to_string(v) + " not in support");
  return static_cast<std::size_t>(it - support_.begin());
}

double TransportProblem::distance(Vertex a, Vertex b) const {
  return metric_[index_of(a) * support_.size() + index_of(b)];
}

void check_balanced(const TransportProblem& p) {
  auto side = [](const std::vector<Mass>& ms, const char* name) {
    double s = 0.0;
    for (const auto& m : ms) {
      if (!(m.mass >= 0.0)) throw Unbalanced(std::string(name) + " has a negative mass");
      s += m.mass;
    }
    if (std::abs(s - 1.0) > kMassSumTolerance)
      throw Unbalanced(std::string(name) + " masses sum to " + std::to_string(s) + ", expected 1");
  };
  side(p.sources(), "source");
  side(p.sinks(), "sink");
}

TransportPlan min_cost_transport(const TransportProblem& p) {
  check_balanced(p);
  const std::size_t m = p.sources().size();
  const std::size_t k = p.sinks().size();

  std::vector<double> supply(m), demand(k);
  for (std::size_t i = 0; i < m; ++i) supply[i] = p.sources()[i].mass;
  for (std::size_t j = 0; j < k; ++j) demand[j] = p.sinks()[j].mass;
  std::vector<double> flow(m * k, 0.0);

  // Node ids: 0 = super source, 1..m sources, m+1..m+k sinks, m+k+1 = super sink.
  const std::size_t nodes = m + k + 2;
  const std::size_t sink_node = m + k + 1;
  std::vector<double> dist(nodes);
  std::vector<long> pred(nodes);

  for (int iter = 0; iter < 10000; ++iter) {
    bool any_supply = std::any_of(supply.begin(), supply.end(), [](double s) { return s > kFlowEps; });
    bool any_demand = std::any_of(demand.begin(), demand.end(), [](double d) { return d > kFlowEps; });
    if (!any_supply || !any_demand) break;

    // Bellman-Ford on the residual graph; reverse arcs carry negative costs.
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(pred.begin(), pred.end(), -1);
    dist[0] = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (supply[i] > kFlowEps) {
        dist[1 + i] = 0.0;
        pred[1 + i] = 0;
      }
    for (std::size_t round = 0; round < nodes; ++round) {
      bool changed = false;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          const std::size_t si = 1 + i, tj = 1 + m + j;
          const double c = p.cost(i, j);
          if (dist[si] < kInf && dist[si] + c < dist[tj] - 1e-15) {
            dist[tj] = dist[si] + c;
            pred[tj] = static_cast<long>(si);
            changed = true;
          }
          if (flow[i * k + j] > kFlowEps && dist[tj] < kInf && dist[tj] - c < dist[si] - 1e-15) {
            dist[si] = dist[tj] - c;
            pred[si] = static_cast<long>(tj);
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    std::size_t best_sink = k;
    for (std::size_t j = 0; j < k; ++j)
      if (demand[j] > kFlowEps && dist[1 + m + j] < kInf &&
          (best_sink == k || dist[1 + m + j] < dist[1 + m + best_sink]))
        best_sink = j;
    if (best_sink == k) break;
    pred[sink_node] = static_cast<long>(1 + m + best_sink);

    // Bottleneck along the path.
    double delta = demand[best_sink];
    std::size_t v = 1 + m + best_sink;
    while (pred[v] != 0) {
      const std::size_t u = static_cast<std::size_t>(pred[v]);
      if (u > m) delta = std::min(delta, flow[(v - 1) * k + (u - 1 - m)]);  // reverse arc sink u -> source v
      v = u;
    }
    delta = std::min(delta, supply[v - 1]);

    v = 1 + m + best_sink;
    demand[best_sink] -= delta;
    while (pred[v] != 0) {
      const std::size_t u = static_cast<std::size_t>(pred[v]);
      if (u > m) {
        double& f = flow[(v - 1) * k + (u - 1 - m)];
        f -= delta;
        if (f < kFlowEps) f = 0.0;
      } else {
        flow[(u - 1) * k + (v - 1 - m)] += delta;
      }
      v = u;
    }
    supply[v - 1] -= delta;
  }

  TransportPlan plan;
  plan.coupling.assign(m, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      plan.coupling[i][j] = flow[i * k + j];
      plan.cost += flow[i * k + j] * p.cost(i, j);
    }
  return plan;
}

double w1_dual(const TransportProblem& p) {
  check_balanced(p);
  const auto& support = p.support();
  const std::size_t n = support.size();
  std::vector<double> net(n, 0.0);
  for (const auto& s : p.sources()) net[p.index_of(s.vertex)] += s.mass;
  for (const auto& t : p.sinks()) net[p.index_of(t.vertex)] -= t.mass;

  LinearProgram lp(n);
  for (std::size_t a = 0; a < n; ++a) {
    lp.set_free(a);
    lp.set_objective(a, -net[a]);
  }
  lp.fix(0, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b) lp.add_row({{a, 1.0}, {b, -1.0}}, Relation::LessEqual, p.distance(support[a], support[b]));
  try {
    return -solve_lp(lp).optimum;
  } catch (const Infeasible&) {
    throw Infeasible("Lipschitz dual infeasible: support distances are not a metric");
  }
}

}  // namespace ricci
