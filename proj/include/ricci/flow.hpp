#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/graph.hpp"

namespace ricci {

enum class FlowMode { Normalized, Unnormalized };
enum class Integrator { Euler, RK4, AdaptiveRK45 };

struct FlowConfig {
  FlowMode mode = FlowMode::Normalized;
  Gamma gamma = Gamma::reciprocal();
  Integrator integrator = Integrator::RK4;
  double step = 1e-3;             // fixed step, or initial step for RK45
  double merge_threshold = 1e-3;  // contract an edge once its weight drops below this
  bool renormalize = false;       // rescale weights to sum 1 at the start of every segment
  double horizon = 100.0;         // per integration segment
  double convergence_tolerance = 1e-10;
  int convergence_window = 10;     // consecutive steps below tolerance
  double sample_interval = 0.1;    // trajectory output spacing
  double rk45_tolerance = 1e-10;   // local error target for the adaptive integrator
  bool perturb_on_stall = false;   // retry once from perturbed weights on NonConvergence
  // Normalized mode only: if a segment starts with sum(w) = 1, rescale onto
  // sum(w) = 1 after every accepted step. The simplex is invariant but
  // repelling whenever sum k w > 0, so round-off would otherwise grow like
  // exp(t sum k w).
  bool project_total_weight = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct FlowState {
  double t = 0.0;
  std::vector<double> w;  // aligned with WeightedGraph::edges()
  double h_hint = 0.0;    // next step size proposed by the adaptive integrator
};

// dw_e/dt = -k_e w_e + w_e * sum_h k_h w_h. Throws DistanceConditionViolated
// if any edge is longer than its endpoints' distance.
std::vector<double> rhs_normalized(const WeightedGraph& g, const Gamma& gamma, std::span<const double> w);
// dw_e/dt = -k_e w_e
std::vector<double> rhs_unnormalized(const WeightedGraph& g, const Gamma& gamma, std::span<const double> w);

// F_e = sum_h k_h w_h - k_e, so that normalized dw_e/dt = w_e F_e.
std::vector<double> edge_drift(std::span<const double> kappa, std::span<const double> w);

// One accepted integrator step. Halves the step (up to 40 times) while any
// trial weight is nonpositive, then throws StepUnderflow.
FlowState step(const FlowState& state, const FlowConfig& config, const WeightedGraph& g);

double total_weight(std::span<const double> w);

enum class SurgeryKind { DeleteEdge, ContractEdge };
std::string to_string(SurgeryKind kind);
SurgeryKind surgery_kind_from_string(const std::string& s);

// Exit condition raised at an accepted step: (I) the edge is longer than the
// best alternative path, or (II) its weight fell below the merge threshold.
struct FlowEvent {
  double t = 0.0;
  SurgeryKind kind = SurgeryKind::ContractEdge;
  Vertex u = 0;
  Vertex v = 0;
};

// First violating edge in lexicographic (u, v) order, if any. Condition (I)
// reads d(u,v) as the shortest path avoiding the edge itself; since
// d = min(w, alternative), that is w - d > 1e-12 on the full metric.
std::optional<FlowEvent> detect_event(const WeightedGraph& g, const DistanceMatrix& dm, double merge_threshold,
                                      double t);

struct FlowSample {
  double t = 0.0;
  std::vector<double> w;
  std::vector<double> kappa;
};

enum class StopReason { Horizon, Converged, Event };
std::string to_string(StopReason r);

struct FlowTrajectory {
  std::vector<Edge> edges;  // topology the samples refer to (weights at t0)
  std::vector<FlowSample> samples;
  StopReason reason = StopReason::Horizon;
  std::optional<FlowEvent> event;
  FlowState final_state;
  double final_max_derivative = 0.0;
  std::size_t steps = 0;
};

// Integrates from the graph's current weights starting at time t0 until the
// horizon, convergence, or the first exit condition. Performs no surgery.
FlowTrajectory integrate(const WeightedGraph& g, const FlowConfig& config, double t0 = 0.0);

}  // namespace ricci
