#include "ricci/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ricci/error.hpp"

namespace ricci {

using nlohmann::json;

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json events_array(const std::vector<SurgeryEvent>& events, bool with_level) {
  json arr = json::array();
  for (const auto& ev : events) {
    json item = {{"t", ev.t}, {"kind", to_string(ev.kind)}, {"u", ev.u}, {"v", ev.v}};
    if (with_level) item["level"] = ev.level;
    arr.push_back(std::move(item));
  }
  return arr;
}

std::vector<SurgeryEvent> events_from(const json& arr) {
  std::vector<SurgeryEvent> out;
  for (const auto& item : arr) {
    SurgeryEvent ev;
    ev.t = item.at("t").get<double>();
    ev.kind = surgery_kind_from_string(item.at("kind").get<std::string>());
    ev.u = item.at("u").get<int>();
    ev.v = item.at("v").get<int>();
    ev.level = item.value("level", 1);
    out.push_back(ev);
  }
  return out;
}

json config_json(const FlowConfig& c) {
  return {{"mode", to_string(c.mode)},
          {"gamma", c.gamma.name()},
          {"integrator", to_string(c.integrator)},
          {"h", c.step},
          {"mt", c.merge_threshold},
          {"horizon", c.horizon},
          {"renormalize", c.renormalize},
          {"convergence_tolerance", c.convergence_tolerance},
          {"seed", c.seed},
          {"condition_one", "alternative-path: w_uv - d(u,v) > 1e-12, d taken in G - uv"}};
}

json report_json(const CurvatureReport& report) {
  json edges = json::array();
  for (const auto& e : report.edges) {
    json item = {{"u", e.u},
                 {"v", e.v},
                 {"kappa", e.kappa},
                 {"lower", e.bounds.lower()},
                 {"upper", e.bounds.upper},
                 {"generic_lower", e.bounds.generic_lower},
                 {"coupling_lower", e.bounds.coupling_lower}};
    if (!e.alpha_samples.empty()) {
      json samples = json::array();
      for (const auto& [a, k] : e.alpha_samples) samples.push_back({a, k});
      item["alpha_samples"] = std::move(samples);
    }
    edges.push_back(std::move(item));
  }
  return edges;
}

CurvatureReport report_from(const json& edges) {
  CurvatureReport report;
  for (const auto& item : edges) {
    EdgeCurvature e;
    e.u = item.at("u").get<int>();
    e.v = item.at("v").get<int>();
    e.kappa = item.at("kappa").get<double>();
    e.bounds.upper = item.at("upper").get<double>();
    e.bounds.generic_lower = item.at("generic_lower").get<double>();
    e.bounds.coupling_lower = item.at("coupling_lower").get<double>();
    if (item.contains("alpha_samples"))
      for (const auto& s : item.at("alpha_samples")) e.alpha_samples.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
    report.edges.push_back(std::move(e));
  }
  return report;
}

template <typename F>
auto parse_json_document(const std::string& text, const char* what, F&& body) {
  try {
    return body(json::parse(text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

std::string curvature_report_to_json(const CurvatureReport& report, const Gamma& gamma) {
  json doc = {{"gamma", gamma.name()}, {"edges", report_json(report)}};
  return doc.dump(2) + "\n";
}

CurvatureReport parse_curvature_report(const std::string& text) {
  return parse_json_document(text, "curvature report", [](const json& doc) { return report_from(doc.at("edges")); });
}

std::string trajectory_to_csv(const FlowTrajectory& traj) {
  std::string out = "t,edge_u,edge_v,w,kappa\n";
  for (const auto& s : traj.samples)
    for (std::size_t i = 0; i < traj.edges.size(); ++i) {
      out += num(s.t) + ',' + std::to_string(traj.edges[i].u) + ',' + std::to_string(traj.edges[i].v) + ',' +
             num(s.w[i]) + ',' + num(s.kappa[i]) + '\n';
    }
  return out;
}

FlowTrajectory parse_trajectory_csv(const std::string& text) {
  struct Row {
    double t, w, kappa;
    int u, v;
  };
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "t,edge_u,edge_v,w,kappa") throw ParseError("trajectory CSV: bad header");
  std::vector<Row> rows;
  for (int lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    Row r;
    char tail;
    if (std::sscanf(line.c_str(), "%lf,%d,%d,%lf,%lf%c", &r.t, &r.u, &r.v, &r.w, &r.kappa, &tail) != 5)
      throw ParseError("trajectory CSV line " + std::to_string(lineno) + ": expected 5 fields");
    rows.push_back(r);
  }
  FlowTrajectory traj;
  if (rows.empty()) return traj;
  // The first sample block fixes the edge set and order.
  std::size_t m = 0;
  while (m < rows.size() && rows[m].t == rows[0].t) ++m;
  for (std::size_t i = 0; i < m; ++i) traj.edges.push_back({rows[i].u, rows[i].v, rows[i].w});
  if (rows.size() % m != 0) throw ParseError("trajectory CSV: ragged sample blocks");
  for (std::size_t b = 0; b < rows.size(); b += m) {
    FlowSample s{rows[b].t, {}, {}};
    for (std::size_t i = 0; i < m; ++i) {
      const Row& r = rows[b + i];
      if (r.t != s.t || r.u != traj.edges[i].u || r.v != traj.edges[i].v)
        throw ParseError("trajectory CSV: sample block at t=" + num(s.t) + " does not match the edge order");
      s.w.push_back(r.w);
      s.kappa.push_back(r.kappa);
    }
    traj.samples.push_back(std::move(s));
  }
  traj.final_state = {traj.samples.back().t, traj.samples.back().w, 0.0};
  return traj;
}

std::string trajectory_events_to_json(const FlowTrajectory& traj, const FlowConfig& config) {
  std::vector<SurgeryEvent> events;
  if (traj.event) events.push_back({traj.event->t, traj.event->kind, traj.event->u, traj.event->v, 1});
  json doc = {{"events", events_array(events, false)},
              {"stop", to_string(traj.reason)},
              {"t_final", traj.final_state.t},
              {"steps", traj.steps},
              {"final_max_derivative", traj.final_max_derivative},
              {"config", config_json(config)}};
  return doc.dump(2) + "\n";
}

std::vector<SurgeryEvent> parse_events_json(const std::string& text) {
  return parse_json_document(text, "events document", [](const json& doc) { return events_from(doc.at("events")); });
}

std::string hierarchy_to_json(const HierarchyResult& result, const FlowConfig& config) {
  json reps = json::array();
  for (Vertex v = 0; v < result.merges.size(); ++v) reps.push_back(result.merges.representative(v));
  json doc = {{"initial", json::parse(graph_to_json(result.initial))},
              {"graph", json::parse(graph_to_json(result.graph))},
              {"labels", result.labels},
              {"events", events_array(result.events, true)},
              {"communities", communities(result)},
              {"representatives", reps},
              {"stop", to_string(result.stop)},
              {"levels", result.levels},
              {"t", result.t},
              {"final_max_derivative", result.final_max_derivative},
              {"curvature", report_json(result.curvature)},
              {"config", config_json(config)}};
  return doc.dump(2) + "\n";
}

HierarchyDocument parse_hierarchy_json(const std::string& text) {
  return parse_json_document(text, "hierarchy document", [](const json& doc) {
    HierarchyDocument h;
    h.initial = parse_graph_json(doc.at("initial").dump());
    h.graph = parse_graph_json(doc.at("graph").dump());
    h.labels = doc.at("labels").get<std::vector<int>>();
    h.events = events_from(doc.at("events"));
    h.communities = doc.at("communities").get<std::vector<std::vector<Vertex>>>();
    h.representatives = doc.at("representatives").get<std::vector<Vertex>>();
    h.stop = doc.at("stop").get<std::string>();
    h.levels = doc.at("levels").get<int>();
    h.t = doc.at("t").get<double>();
    if (h.labels.size() != h.graph.edge_count()) throw ParseError("hierarchy document: one label per edge expected");
    return h;
  });
}

std::string format_curvature_table(const CurvatureReport& report) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%6s %6s %22s %22s %10s\n", "u", "v", "kappa", "lower", "upper");
  out += buf;
  for (const auto& e : report.edges) {
    std::snprintf(buf, sizeof buf, "%6d %6d %22.15g %22.15g %10.4g\n", e.u, e.v, e.kappa, e.bounds.lower(),
                  e.bounds.upper);
    out += buf;
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw Error("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string to_string(FlowMode m) { return m == FlowMode::Normalized ? "normalized" : "unnormalized"; }

std::string to_string(Integrator i) {
  switch (i) {
    case Integrator::Euler:
      return "euler";
    case Integrator::RK4:
      return "rk4";
    case Integrator::AdaptiveRK45:
      return "rk45";
  }
  return {};
}

FlowMode flow_mode_from_string(const std::string& s) {
  if (s == "normalized") return FlowMode::Normalized;
  if (s == "unnormalized") return FlowMode::Unnormalized;
  throw ParseError("unknown flow mode '" + s + "'");
}

Integrator integrator_from_string(const std::string& s) {
  if (s == "euler") return Integrator::Euler;
  if (s == "rk4") return Integrator::RK4;
  if (s == "rk45") return Integrator::AdaptiveRK45;
  throw ParseError("unknown integrator '" + s + "'");
}

}  // namespace ricci
