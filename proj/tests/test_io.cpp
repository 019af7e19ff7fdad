#include <doctest.h>

#include "ricci/error.hpp"
#include "ricci/io.hpp"
#include "ricci/oracles/oracles.hpp"

using namespace ricci;
namespace orc = ricci::oracles;

TEST_CASE("curvature report round-trips") {
  auto g = orc::star_graph({0.5, 0.3, 0.2});
  std::vector<double> alphas = {0.25, 0.9};
  auto report = curvature_report(g, Gamma::reciprocal(), alphas);
  auto text = curvature_report_to_json(report, Gamma::reciprocal());
  auto back = parse_curvature_report(text);
  REQUIRE(back.edges.size() == report.edges.size());
  for (std::size_t i = 0; i < back.edges.size(); ++i) {
    CHECK(back.edges[i].u == report.edges[i].u);
    CHECK(back.edges[i].kappa == report.edges[i].kappa);
    CHECK(back.edges[i].bounds.coupling_lower == report.edges[i].bounds.coupling_lower);
    CHECK(back.edges[i].alpha_samples == report.edges[i].alpha_samples);
  }
  CHECK(curvature_report_to_json(back, Gamma::reciprocal()) == text);
  CHECK(text.find("\"lower\"") != std::string::npos);
  CHECK_THROWS_AS(parse_curvature_report("{\"edges\": 3}"), ParseError);
}

TEST_CASE("trajectory CSV round-trips") {
  auto g = orc::star_graph({0.5, 0.3, 0.2});
  FlowConfig c;
  c.horizon = 1.0;
  c.sample_interval = 0.25;
  auto traj = integrate(g, c);
  auto csv = trajectory_to_csv(traj);
  CHECK(csv.rfind("t,edge_u,edge_v,w,kappa\n", 0) == 0);
  auto back = parse_trajectory_csv(csv);
  REQUIRE(back.samples.size() == traj.samples.size());
  REQUIRE(back.edges.size() == traj.edges.size());
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    CHECK(back.samples[k].t == traj.samples[k].t);
    CHECK(back.samples[k].w == traj.samples[k].w);
    CHECK(back.samples[k].kappa == traj.samples[k].kappa);
  }
  CHECK(trajectory_to_csv(back) == csv);
  CHECK_THROWS_AS(parse_trajectory_csv("t,w\n"), ParseError);
  CHECK_THROWS_AS(parse_trajectory_csv("t,edge_u,edge_v,w,kappa\n0,0,1,0.5\n"), ParseError);
}

TEST_CASE("events and hierarchy documents round-trip") {
  auto g = orc::path_graph({0.6, 0.4});
  FlowConfig c;
  c.gamma = Gamma::reciprocal_square();
  auto traj = integrate(g, c);
  auto events = parse_events_json(trajectory_events_to_json(traj, c));
  REQUIRE(events.size() == 1);
  CHECK(events[0].t == traj.event->t);
  CHECK(events[0].kind == SurgeryKind::ContractEdge);

  auto tri = parse_edge_list("0 1 0.2\n1 2 0.2\n0 2 0.6");
  FlowConfig sc;
  sc.step = 1e-2;
  sc.renormalize = true;
  auto result = run_flow_with_surgery(tri, sc);
  auto text = hierarchy_to_json(result, sc);
  auto doc = parse_hierarchy_json(text);
  CHECK(doc.labels == result.labels);
  CHECK(doc.events.size() == result.events.size());
  CHECK(doc.communities == communities(result));
  CHECK(doc.graph.edge_count() == result.graph.edge_count());
  CHECK(doc.stop == to_string(result.stop));
  for (std::size_t i = 0; i < doc.graph.edge_count(); ++i) CHECK(doc.graph.edge(i).w == result.graph.edge(i).w);
}

TEST_CASE("minor with tombstoned vertices survives JSON") {
  auto g = orc::path_graph({0.3, 0.3, 0.4});
  auto c = contract_edge(g, 1, 0, MergeMap(g.vertex_slots()));
  auto back = parse_graph_json(graph_to_json(c.graph));
  CHECK_FALSE(back.alive(0));
  CHECK(back.vertex_count() == 3);
  CHECK(back.edge_count() == 2);
}

TEST_CASE("enum names") {
  CHECK(flow_mode_from_string(to_string(FlowMode::Unnormalized)) == FlowMode::Unnormalized);
  for (auto i : {Integrator::Euler, Integrator::RK4, Integrator::AdaptiveRK45})
    CHECK(integrator_from_string(to_string(i)) == i);
  CHECK_THROWS_AS(integrator_from_string("leapfrog"), ParseError);
  CHECK(surgery_kind_from_string("delete") == SurgeryKind::DeleteEdge);
}
