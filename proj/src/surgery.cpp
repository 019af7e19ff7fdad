#include "ricci/surgery.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "ricci/error.hpp"

namespace ricci {

namespace {

WeightedGraph renormalized(const WeightedGraph& g) {
  auto w = g.weights();
  const double total = total_weight(w);
  for (double& x : w) x /= total;
  return g.with_weights(w);
}

WeightedGraph perturbed(const WeightedGraph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto w = g.weights();
  for (double& x : w) x *= 1.0 + 1e-6 * unit(rng);
  return g.with_weights(w);
}

void apply(const WeightedGraph& g, const FlowEvent& ev, WeightedGraph& out, MergeMap& merges) {
  if (ev.kind == SurgeryKind::DeleteEdge) {
    out = delete_edge(g, ev.u, ev.v);
    return;
  }
  const Vertex survivor = contraction_survivor(g, ev.u, ev.v);
  const Vertex absorbed = survivor == ev.u ? ev.v : ev.u;
  auto c = contract_edge(g, survivor, absorbed, std::move(merges));
  out = std::move(c.graph);
  merges = std::move(c.merges);
}

}  // namespace

std::string to_string(HierarchyStop s) { return s == HierarchyStop::Stationary ? "stationary" : "last-edge"; }

Vertex contraction_survivor(const WeightedGraph& g, Vertex a, Vertex b) {
  const int da = g.degree(a), db = g.degree(b);
  if (da != db) return da > db ? a : b;
  return std::min(a, b);
}

HierarchyResult run_flow_with_surgery(const WeightedGraph& g, const FlowConfig& config) {
  config.validate();
  HierarchyResult result;
  result.initial = g;
  result.merges = MergeMap(g.vertex_slots());
  WeightedGraph cur = g;
  double t = 0.0;
  bool retried = false;

  for (int level = 1;; ++level) {
    bool surgery = false;
    bool last_edge = false;
    while (true) {
      if (config.renormalize) cur = renormalized(cur);
      FlowTrajectory traj = integrate(cur, config, t);
      if (traj.reason == StopReason::Horizon) {
        if (config.perturb_on_stall && !retried) {
          retried = true;
          cur = perturbed(cur, config.seed);
          continue;
        }
        throw NonConvergence("no convergence or event by t=" + std::to_string(traj.final_state.t) +
                             " (max |dw/dt| = " + std::to_string(traj.final_max_derivative) + ")");
      }
      t = traj.final_state.t;
      cur = cur.with_weights(traj.final_state.w);
      result.final_max_derivative = traj.final_max_derivative;
      if (traj.reason == StopReason::Converged) break;

      const FlowEvent& ev = *traj.event;
      if (ev.kind == SurgeryKind::ContractEdge && cur.edge_count() == 1) {
        last_edge = true;
        break;
      }
      apply(cur, ev, cur, result.merges);
      result.events.push_back({ev.t, ev.kind, ev.u, ev.v, level});
      surgery = true;
    }
    result.labels.assign(cur.edge_count(), level);
    result.levels = level;
    if (last_edge) {
      result.stop = HierarchyStop::LastEdge;
      break;
    }
    if (!surgery) {
      result.stop = HierarchyStop::Stationary;
      break;
    }
  }
  result.graph = cur;
  result.t = t;
  result.curvature = curvature_report(cur, config.gamma);
  return result;
}

std::vector<std::vector<Vertex>> communities(const HierarchyResult& result) {
  std::map<Vertex, std::vector<Vertex>> groups;
  for (Vertex v : result.initial.vertices()) groups[result.merges.representative(v)].push_back(v);
  std::vector<std::vector<Vertex>> out;
  for (auto& [rep, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

Replay replay_events(const WeightedGraph& initial, std::span<const SurgeryEvent> events) {
  Replay r{initial, MergeMap(initial.vertex_slots())};
  for (const auto& ev : events) {
    if (!r.graph.find_edge(ev.u, ev.v))
      throw Error("event log names edge (" + std::to_string(ev.u) + "," + std::to_string(ev.v) +
                  ") that is not in the graph");
    apply(r.graph, {ev.t, ev.kind, ev.u, ev.v}, r.graph, r.merges);
  }
  return r;
}

}  // namespace ricci
