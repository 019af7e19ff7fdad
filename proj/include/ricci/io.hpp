#pragma once

#include <string>
#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/flow.hpp"
#include "ricci/surgery.hpp"

namespace ricci {

// Every writer has a matching parser; parse(write(x)) reproduces x exactly
// (doubles are written with 17 significant digits).

std::string curvature_report_to_json(const CurvatureReport& report, const Gamma& gamma);
CurvatureReport parse_curvature_report(const std::string& text);

// Header `t,edge_u,edge_v,w,kappa`, one row per edge per sample.
std::string trajectory_to_csv(const FlowTrajectory& traj);
// Rebuilds edges and samples; edge weights are taken from the first sample.
FlowTrajectory parse_trajectory_csv(const std::string& text);

// {"events":[{"t","kind","u","v"}], ...} plus run metadata.
std::string trajectory_events_to_json(const FlowTrajectory& traj, const FlowConfig& config);
std::vector<SurgeryEvent> parse_events_json(const std::string& text);

std::string hierarchy_to_json(const HierarchyResult& result, const FlowConfig& config);

struct HierarchyDocument {
  WeightedGraph initial;
  WeightedGraph graph;
  std::vector<int> labels;
  std::vector<SurgeryEvent> events;
  std::vector<std::vector<Vertex>> communities;
  std::vector<Vertex> representatives;  // per original vertex slot
  std::string stop;
  int levels = 0;
  double t = 0.0;
};
HierarchyDocument parse_hierarchy_json(const std::string& text);

// Human-readable table of a curvature report.
std::string format_curvature_table(const CurvatureReport& report);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

std::string to_string(FlowMode m);
std::string to_string(Integrator i);
FlowMode flow_mode_from_string(const std::string& s);
Integrator integrator_from_string(const std::string& s);

}  // namespace ricci
