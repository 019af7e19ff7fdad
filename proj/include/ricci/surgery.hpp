#pragma once

#include <span>
#include <string>
#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/flow.hpp"
#include "ricci/graph.hpp"

namespace ricci {

struct SurgeryEvent {
  double t = 0.0;
  SurgeryKind kind = SurgeryKind::ContractEdge;
  Vertex u = 0;
  Vertex v = 0;
  int level = 1;
};

enum class HierarchyStop {
  Stationary,  // a whole level converged without any surgery
  LastEdge,    // a single edge remained and hit the merge threshold
};
std::string to_string(HierarchyStop s);

struct HierarchyResult {
  WeightedGraph initial;
  WeightedGraph graph;      // final minor, weights at the end of the run
  std::vector<int> labels;  // hierarchy level per edge of `graph`
  MergeMap merges;
  std::vector<SurgeryEvent> events;
  CurvatureReport curvature;  // of the final minor
  HierarchyStop stop = HierarchyStop::Stationary;
  int levels = 0;  // number of completed levels
  double t = 0.0;  // total flow time
  double final_max_derivative = 0.0;
};

// The survivor of contracting edge (a, b): the endpoint of larger degree,
// ties going to the smaller id.
Vertex contraction_survivor(const WeightedGraph& g, Vertex a, Vertex b);

// Alternates integrate() and surgery. Each event removes exactly one edge and
// restarts integration on the new minor. A converged segment labels every
// edge with the current level; the run ends when a level needs no surgery or
// the last edge would be contracted.
// Throws NonConvergence when a segment reaches the horizon with neither
// convergence nor an event (after one perturbed retry if enabled).
HierarchyResult run_flow_with_surgery(const WeightedGraph& g, const FlowConfig& config);

// Original vertices grouped by merge representative. Groups are sorted, and
// ordered by their smallest vertex.
std::vector<std::vector<Vertex>> communities(const HierarchyResult& result);

struct Replay {
  WeightedGraph graph;  // final topology; weights are whatever surgery left
  MergeMap merges;
};

// Applies the event log to the initial graph's topology.
Replay replay_events(const WeightedGraph& initial, std::span<const SurgeryEvent> events);

}  // namespace ricci
