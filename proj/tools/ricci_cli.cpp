// ricci: curvature, flow, community detection and self-validation on weighted graphs.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ricci/curvature.hpp"
#include "ricci/error.hpp"
#include "ricci/flow.hpp"
#include "ricci/io.hpp"
#include "ricci/surgery.hpp"
#include "ricci/validation/acceptance.hpp"

namespace {

enum Exit { kOk = 0, kInput = 1, kSolver = 2, kFlow = 3, kValidation = 4 };

struct Manifest {
  std::string input;
  std::string gamma = "reciprocal";
  std::string mode = "normalized";
  std::string integrator = "rk4";
  double h = 1e-3;
  double horizon = 100.0;
  double mt = 1e-3;
  double tolerance = 1e-10;
  double sample = 0.1;
  bool renormalize = false;
  bool perturb = false;
  std::uint64_t seed = 0;
  std::string out = ".";
  std::vector<double> alphas;
  // validate
  std::string filter;
  bool mutate = false;
};

ricci::FlowConfig flow_config(const Manifest& m) {
  ricci::FlowConfig c;
  c.gamma = ricci::Gamma::parse(m.gamma);
  c.mode = ricci::flow_mode_from_string(m.mode);
  c.integrator = ricci::integrator_from_string(m.integrator);
  c.step = m.h;
  c.horizon = m.horizon;
  c.merge_threshold = m.mt;
  c.convergence_tolerance = m.tolerance;
  c.sample_interval = m.sample;
  c.renormalize = m.renormalize;
  c.perturb_on_stall = m.perturb;
  c.seed = m.seed;
  c.validate();
  return c;
}

std::string out_path(const Manifest& m, const char* name) {
  std::filesystem::create_directories(m.out);
  return (std::filesystem::path(m.out) / name).string();
}

int cmd_curvature(const Manifest& m) {
  const auto g = ricci::load_graph(m.input);
  const auto gamma = ricci::Gamma::parse(m.gamma);
  const auto report = ricci::curvature_report(g, gamma, m.alphas);
  ricci::write_file(out_path(m, "curvature.json"), ricci::curvature_report_to_json(report, gamma));
  std::cout << ricci::format_curvature_table(report);
  return kOk;
}

int cmd_flow(const Manifest& m) {
  const auto g = ricci::load_graph(m.input);
  const auto config = flow_config(m);
  const auto traj = ricci::integrate(g, config);
  ricci::write_file(out_path(m, "trajectory.csv"), ricci::trajectory_to_csv(traj));
  ricci::write_file(out_path(m, "events.json"), ricci::trajectory_events_to_json(traj, config));
  std::printf("stop=%s t=%.10g steps=%zu max|dw/dt|=%.6e sum(w)=%.15g", ricci::to_string(traj.reason).c_str(),
              traj.final_state.t, traj.steps, traj.final_max_derivative, ricci::total_weight(traj.final_state.w));
  if (traj.event)
    std::printf(" event=%s(%d,%d)", ricci::to_string(traj.event->kind).c_str(), traj.event->u, traj.event->v);
  std::printf("\n");
  return kOk;
}

int cmd_detect(const Manifest& m) {
  const auto g = ricci::load_graph(m.input);
  const auto config = flow_config(m);
  const auto result = ricci::run_flow_with_surgery(g, config);
  ricci::write_file(out_path(m, "hierarchy.json"), ricci::hierarchy_to_json(result, config));
  for (const auto& ev : result.events)
    std::printf("t=%.10g level=%d %s(%d,%d)\n", ev.t, ev.level, ricci::to_string(ev.kind).c_str(), ev.u, ev.v);
  const auto groups = ricci::communities(result);
  std::printf("stop=%s levels=%d events=%zu final_edges=%zu communities=%zu\n", ricci::to_string(result.stop).c_str(),
              result.levels, result.events.size(), result.graph.edge_count(), groups.size());
  for (const auto& grp : groups) {
    std::printf(" ");
    for (auto v : grp) std::printf(" %d", v);
    std::printf("\n");
  }
  return kOk;
}

int cmd_validate(const Manifest& m) {
  ricci::validation::ValidationOptions o;
  o.filter = m.filter;
  o.mutate_star_formula = m.mutate;
  if (m.seed != 0) o.seed = m.seed;
  const auto results = ricci::validation::run_validation(o);
  if (results.empty()) {
    std::fprintf(stderr, "no criterion matches filter '%s'\n", m.filter.c_str());
    return kValidation;
  }
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%s\n", ricci::validation::format_result(r).c_str());
    ok = ok && r.pass;
  }
  return ok ? kOk : kValidation;
}

void add_flow_flags(CLI::App* sub, Manifest& m) {
  sub->add_option("--mode", m.mode, "normalized | unnormalized")->check(CLI::IsMember({"normalized", "unnormalized"}));
  sub->add_option("--integrator", m.integrator, "euler | rk4 | rk45")->check(CLI::IsMember({"euler", "rk4", "rk45"}));
  sub->add_option("--h", m.h, "step size (initial step for rk45)");
  sub->add_option("--horizon", m.horizon, "integration horizon per segment");
  sub->add_option("--mt", m.mt, "merge threshold");
  sub->add_option("--tolerance", m.tolerance, "convergence tolerance on max |dw/dt|");
  sub->add_option("--sample", m.sample, "trajectory sampling interval");
  sub->add_flag("--renormalize", m.renormalize, "rescale weights to sum 1 at the start of every segment");
  sub->add_option("--seed", m.seed, "seed for the perturbed retry");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ricci curvature and Ricci flow on weighted graphs"};
  app.set_help_flag("--help", "print this help message and exit");  // -h is taken by the step size
  app.require_subcommand(1);
  Manifest m;

  auto* curvature = app.add_subcommand("curvature", "per-edge curvature report");
  curvature->add_option("graph", m.input, "edge list or JSON graph")->required();
  curvature->add_option("--alphas", m.alphas, "also sample alpha-Ricci curvature at these idleness values");

  auto* flow = app.add_subcommand("flow", "integrate the Ricci flow until horizon, convergence or first event");
  flow->add_option("graph", m.input, "edge list or JSON graph")->required();
  add_flow_flags(flow, m);

  auto* detect = app.add_subcommand("detect", "Ricci flow with surgery; writes the hierarchy and communities");
  detect->add_option("graph", m.input, "edge list or JSON graph")->required();
  add_flow_flags(detect, m);
  detect->add_flag("--perturb", m.perturb, "on non-convergence retry once from weights perturbed by 1e-6");

  auto* validate = app.add_subcommand("validate", "run the acceptance suite");
  validate->add_option("--filter", m.filter, "criterion id or name substring");
  validate->add_flag("--mutate", m.mutate, "perturb the closed-form star curvature (must fail)");
  validate->add_option("--seed", m.seed, "seed for randomized checks");

  for (auto* sub : {curvature, flow, detect}) {
    sub->add_option("--gamma", m.gamma, "reciprocal | identity | reciprocal-square | power:k");
    sub->add_option("--out", m.out, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*curvature) return cmd_curvature(m);
    if (*flow) return cmd_flow(m);
    if (*detect) return cmd_detect(m);
    return cmd_validate(m);
  } catch (const ricci::StepUnderflow& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFlow;
  } catch (const ricci::NonConvergence& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFlow;
  } catch (const ricci::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInput;
  }
}
