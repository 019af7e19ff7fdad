#include "ricci/validation/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "ricci/curvature.hpp"
#include "ricci/error.hpp"
#include "ricci/flow.hpp"
#include "ricci/oracles/oracles.hpp"
#include "ricci/surgery.hpp"
#include "ricci/transport.hpp"

namespace ricci::validation {

namespace {

namespace orc = ricci::oracles;

constexpr int kNoConvergenceStop = std::numeric_limits<int>::max();

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Accumulates a verdict and the worst measured value of each check.
struct Verdict {
  bool pass = true;
  std::string detail;
  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAIL]");
  }
};

FlowConfig base_config(Gamma gamma, double h, double horizon) {
  FlowConfig c;
  c.gamma = gamma;
  c.integrator = Integrator::RK4;
  c.step = h;
  c.horizon = horizon;
  c.convergence_window = kNoConvergenceStop;
  return c;
}

const FlowSample* sample_at(const FlowTrajectory& traj, double t) {
  for (const auto& s : traj.samples)
    if (std::abs(s.t - t) <= 1e-9) return &s;
  return nullptr;
}

// --- 1 -------------------------------------------------------------------
Verdict constant_regime(const ValidationOptions&) {
  Verdict v;
  const auto g = orc::path_graph({0.3, 0.7});
  auto traj = integrate(g, base_config(Gamma::reciprocal(), 1e-3, 10.0));
  double drift = 0.0, kappa_err = 0.0;
  for (const auto& s : traj.samples)
    for (std::size_t i = 0; i < 2; ++i) {
      drift = std::max(drift, std::abs(s.w[i] - g.edge(i).w));
      kappa_err = std::max(kappa_err, std::abs(s.kappa[i] - 1.0));
    }
  v.check(traj.final_state.t == 10.0, fmt("integrated to t=%.6g", traj.final_state.t));
  v.check(drift <= 1e-8, fmt("max weight drift %.3e (<= 1e-8)", drift));
  v.check(kappa_err <= 1e-9, fmt("max |kappa-1| %.3e (<= 1e-9)", kappa_err));
  return v;
}

// --- 2 -------------------------------------------------------------------
Verdict stable_regime(const ValidationOptions&) {
  Verdict v;
  const auto g = orc::path_graph({0.2, 0.8});
  auto config = base_config(Gamma::identity(), 1e-3, 5.0);
  config.sample_interval = 0.5;
  auto traj = integrate(g, config);
  double worst = 0.0;
  bool all_found = true;
  for (double t : {0.5, 1.0, 2.0, 5.0}) {
    const FlowSample* s = sample_at(traj, t);
    if (!s) {
      all_found = false;
      continue;
    }
    const double expected = orc::path2_solution(orc::Path2Regime::Stable, {0.2, 0.8}, t)[0];
    worst = std::max(worst, std::abs(s->w[0] - expected));
  }
  v.check(all_found, "samples at t=0.5,1,2,5");
  v.check(worst <= 1e-6, fmt("max |w_xz - (1/2 - 0.3e^{-2t})| %.3e (<= 1e-6)", worst));
  return v;
}

// --- 3 -------------------------------------------------------------------
Verdict collapsing_regime(const ValidationOptions&) {
  Verdict v;
  const auto g = orc::path_graph({0.6, 0.4});  // x=0, z=1, y=2
  auto config = base_config(Gamma::reciprocal_square(), 1e-3, 1000.0);
  config.merge_threshold = 1e-3;
  config.sample_interval = 1e-3;
  auto traj = integrate(g, config);

  bool monotone = true;
  for (std::size_t i = 1; i < traj.samples.size(); ++i)
    if (!(traj.samples[i].w[1] < traj.samples[i - 1].w[1])) monotone = false;
  v.check(monotone, fmt("w_yz strictly decreasing over %zu samples", traj.samples.size()));

  const bool contracted = traj.event && traj.event->kind == SurgeryKind::ContractEdge && traj.event->u == 1 &&
                          traj.event->v == 2;
  const double t_event = traj.event ? traj.event->t : std::numeric_limits<double>::infinity();
  const double t_ref = orc::path2_collapse_time({0.6, 0.4}, 1e-3);
  v.check(contracted && std::isfinite(t_event),
          fmt("contract(1,2) event at t=%.6f (reference crossing %.6f)", t_event, t_ref));

  const auto& last = traj.samples.back();
  const double kappa_xz = last.kappa[0], kappa_yz = last.kappa[1];
  v.check(std::abs(kappa_xz - 2.0) <= 1e-3, fmt("kappa_xz at event %.9f, |kappa_xz-2| %.3e (<= 1e-3)", kappa_xz,
                                                 std::abs(kappa_xz - 2.0)));
  // Context for the verdict above: the closed form for this instance.
  const auto closed = orc::path2_curvature(orc::Path2Regime::Collapsing, {last.w[0], last.w[1]});
  v.detail += fmt("; context: kappa_yz %.9f, closed form (kappa_xz, kappa_yz) = (%.9f, %.9f) at w=(%.6f, %.3e)",
                  kappa_yz, closed[0], closed[1], last.w[0], last.w[1]);
  return v;
}

// --- 4 -------------------------------------------------------------------
Verdict path_convergence(const ValidationOptions& o) {
  Verdict v;
  std::mt19937_64 rng(o.seed + 4);
  const auto expected = orc::path_curvature_expected(6);
  double worst_kappa = 0.0, worst_final = 0.0;
  int paths2 = 0, runs = 0;
  for (int rep = 0; rep < 10; ++rep) {
    const auto g = orc::path_graph(orc::random_simplex_point(6, rng));
    auto kappa = edge_curvatures(g, all_pairs_distances(g), Gamma::reciprocal());
    for (std::size_t i = 0; i < kappa.size(); ++i) worst_kappa = std::max(worst_kappa, std::abs(kappa[i] - expected[i]));

    auto config = base_config(Gamma::reciprocal(), 1e-2, 200.0);
    config.convergence_window = 10;
    config.merge_threshold = 1e-3;
    config.renormalize = true;
    auto result = run_flow_with_surgery(g, config);
    ++runs;
    const auto& fg = result.graph;
    bool is_path2 = fg.edge_count() == 2 && fg.vertex_count() == 3;
    if (is_path2) {
      int deg2 = 0;
      for (Vertex x : fg.vertices()) deg2 += fg.degree(x) == 2;
      is_path2 = deg2 == 1;
    }
    paths2 += is_path2;
    auto dw = rhs_normalized(fg, Gamma::reciprocal(), fg.weights());
    for (double d : dw) worst_final = std::max(worst_final, std::abs(d));
  }
  v.check(worst_kappa <= 1e-9, fmt("max |kappa - (1,0,0,0,0,1)| %.3e over 10 paths (<= 1e-9)", worst_kappa));
  v.check(paths2 == runs, fmt("%d/%d runs end on a path of length 2", paths2, runs));
  v.check(worst_final < 1e-10, fmt("final max|dw/dt| %.3e (< 1e-10)", worst_final));
  return v;
}

// --- 5 -------------------------------------------------------------------
Verdict star_convergence(const ValidationOptions& o) {
  Verdict v;
  std::mt19937_64 rng(o.seed + 5);
  double worst_fixed = 0.0, worst_kappa = 0.0;
  int sign_flips = 0, monotone_breaks = 0, samples = 0;
  for (int d : {3, 5, 8}) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto init = orc::random_simplex_point(d, rng);
      const auto g = orc::star_graph(init);
      auto config = base_config(Gamma::reciprocal(), 1e-2, 50.0);
      config.convergence_window = 10;
      config.sample_interval = 0.1;
      auto traj = integrate(g, config);

      const auto f0 = edge_drift(traj.samples.front().kappa, traj.samples.front().w);
      auto sign_class = [](double f) { return f > 1e-10 ? 1 : (f < -1e-10 ? -1 : 0); };
      // F_e(0) >= 0 implies F_e(t) >= 0 and likewise for <= 0, so a drift that
      // starts in the zero band stays there, and a signed drift may decay
      // into the band but never reach the opposite sign.
      auto violates = [&](double f, double start) {
        const int c0 = sign_class(start), c = sign_class(f);
        return c0 == 0 ? c != 0 : c == -c0;
      };
      const FlowSample* prev = nullptr;
      for (const auto& s : traj.samples) {
        ++samples;
        auto f = edge_drift(s.kappa, s.w);
        auto expect = orc::star_expected(d, s.w);
        for (int i = 0; i < d; ++i) {
          if (violates(f[i], f0[i])) ++sign_flips;
          // hence w_e is monotone in the direction of F_e(0)
          if (prev && sign_class(f0[i]) * (s.w[i] - prev->w[i]) < -1e-12) ++monotone_breaks;
          double kappa_formula = expect.kappa[i] + (o.mutate_star_formula ? 1e-7 : 0.0);
          worst_kappa = std::max(worst_kappa, std::abs(kappa_formula - s.kappa[i]));
        }
        prev = &s;
      }
      for (double w : traj.final_state.w) worst_fixed = std::max(worst_fixed, std::abs(w - 1.0 / d));
    }
  }
  v.check(worst_fixed <= 1e-5, fmt("max |w - 1/d| at end %.3e (<= 1e-5)", worst_fixed));
  v.check(sign_flips == 0, fmt("%d F_e sign reversals over %d samples", sign_flips, samples));
  v.check(monotone_breaks == 0, fmt("%d non-monotone weight steps", monotone_breaks));
  v.check(worst_kappa <= 1e-9, fmt("max |kappa_formula - kappa_lp| %.3e (<= 1e-9)", worst_kappa));
  return v;
}

// --- 6 -------------------------------------------------------------------
Verdict unnormalized_collapse(const ValidationOptions&) {
  Verdict v;
  const auto g = orc::path_graph({0.5, 0.5});
  auto config = base_config(Gamma::reciprocal(), 1e-3, 2.0);
  config.mode = FlowMode::Unnormalized;
  auto traj = integrate(g, config);
  double worst = 0.0;
  for (double t : {1.0, 2.0}) {
    const FlowSample* s = sample_at(traj, t);
    if (!s) {
      v.check(false, fmt("sample at t=%g", t));
      continue;
    }
    auto expected = orc::unnormalized_path2_solution({0.5, 0.5}, t);
    for (int i = 0; i < 2; ++i) worst = std::max(worst, std::abs(s->w[i] - expected[i]));
  }
  v.check(worst <= 1e-6, fmt("max |w - w0 e^{-t}| at t=1,2: %.3e (<= 1e-6)", worst));

  // System matrix from the implementation's measure at z; it must reproduce
  // the unnormalized right-hand side and have spectrum {-1, -2}.
  double eig_err = 0.0, rhs_err = 0.0;
  const auto expected = orc::unnormalized_path2_eigenvalues();
  for (const Gamma& gamma : {Gamma::reciprocal(), Gamma::identity(), Gamma::reciprocal_square()})
    for (const std::vector<double>& w : {std::vector<double>{0.5, 0.5}, {0.3, 0.7}, {0.6, 0.4}, {0.15, 0.85}}) {
      const auto p = orc::path_graph(w);
      const auto mu = measure(p, gamma, 1, 0.0);
      const double a_x = mu.masses[0].mass, a_y = mu.masses[1].mass;
      Eigen::Matrix2d m;
      m << -(1.0 + a_x), a_y, a_x, -(1.0 + a_y);
      const auto dw = rhs_unnormalized(p, gamma, w);
      const Eigen::Vector2d mw = m * Eigen::Vector2d(w[0], w[1]);
      rhs_err = std::max({rhs_err, std::abs(mw[0] - dw[0]), std::abs(mw[1] - dw[1])});
      Eigen::EigenSolver<Eigen::Matrix2d> es(m);
      std::array<double, 2> ev = {es.eigenvalues()[0].real(), es.eigenvalues()[1].real()};
      std::sort(ev.begin(), ev.end());
      for (int i = 0; i < 2; ++i)
        eig_err = std::max({eig_err, std::abs(ev[i] - expected[i]), std::abs(es.eigenvalues()[i].imag())});
    }
  v.check(rhs_err <= 1e-12, fmt("system matrix reproduces rhs_unnormalized to %.3e", rhs_err));
  v.check(eig_err <= 1e-12, fmt("eigenvalue error vs {-1,-2} %.3e (<= 1e-12)", eig_err));
  return v;
}

// --- 7 -------------------------------------------------------------------
Verdict transport(const ValidationOptions& o) {
  Verdict v;
  std::mt19937_64 rng(o.seed + 7);
  double worst_brute = 0.0, worst_gap = 0.0, worst_marginal = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    auto p = orc::random_transport_problem(rng);
    auto plan = min_cost_transport(p);
    worst_brute = std::max(worst_brute, std::abs(plan.cost - orc::transport_bruteforce(p)));
    worst_gap = std::max(worst_gap, std::abs(plan.cost - w1_dual(p)));
    for (std::size_t i = 0; i < p.sources().size(); ++i) {
      double row = 0.0;
      for (double a : plan.coupling[i]) row += a;
      worst_marginal = std::max(worst_marginal, std::abs(row - p.sources()[i].mass));
    }
    for (std::size_t j = 0; j < p.sinks().size(); ++j) {
      double col = 0.0;
      for (const auto& r : plan.coupling) col += r[j];
      worst_marginal = std::max(worst_marginal, std::abs(col - p.sinks()[j].mass));
    }
  }
  v.check(worst_brute <= 1e-10, fmt("max |primal - brute force| %.3e (<= 1e-10)", worst_brute));
  v.check(worst_gap <= 1e-7, fmt("max primal-dual gap %.3e (<= 1e-7)", worst_gap));
  v.check(worst_marginal <= 1e-10, fmt("max marginal error %.3e", worst_marginal));
  return v;
}

// --- 8 -------------------------------------------------------------------
Verdict curvature_bounds_check(const ValidationOptions& o) {
  Verdict v;
  std::mt19937_64 rng(o.seed + 8);
  std::uniform_int_distribution<int> size(2, 10);
  int violations = 0, edges = 0;
  double min_margin_lower = std::numeric_limits<double>::infinity();
  double min_margin_upper = min_margin_lower, min_margin_cert = min_margin_lower;
  for (int rep = 0; rep < 50; ++rep) {
    const auto g = orc::random_connected_graph(size(rng), 0.35, rng);
    const auto report = curvature_report(g, Gamma::reciprocal());
    for (const auto& e : report.edges) {
      ++edges;
      const double lo = e.kappa - e.bounds.generic_lower, up = e.bounds.upper - e.kappa,
                   cert = e.kappa - e.bounds.coupling_lower;
      min_margin_lower = std::min(min_margin_lower, lo);
      min_margin_upper = std::min(min_margin_upper, up);
      min_margin_cert = std::min(min_margin_cert, cert);
      if (lo < -1e-9 || up < -1e-9 || cert < -1e-9) ++violations;
    }
  }
  v.check(violations == 0, fmt("%d violations over %d edges of 50 graphs", violations, edges));
  v.detail += fmt("; min margins: kappa-generic %.3e, 2-kappa %.3e, kappa-certificate %.3e", min_margin_lower,
                  min_margin_upper, min_margin_cert);
  return v;
}

// --- 9 -------------------------------------------------------------------
Verdict conservation(const ValidationOptions&) {
  Verdict v;
  const std::vector<double> init = {0.4, 0.3, 0.2, 0.1};
  const auto g = orc::star_graph(init);
  auto config = base_config(Gamma::reciprocal(), 1e-3, 10.0);
  config.project_total_weight = false;  // measure the integrator's own drift
  auto norm = integrate(g, config);
  double drift = 0.0;
  for (const auto& s : norm.samples) drift = std::max(drift, std::abs(total_weight(s.w) - 1.0));
  v.check(norm.final_state.t == 10.0, fmt("normalized run reached t=%.6g", norm.final_state.t));
  v.check(drift <= 1e-8, fmt("max |sum w - 1| %.3e up to t=10 (<= 1e-8)", drift));

  config.mode = FlowMode::Unnormalized;
  auto unnorm = integrate(g, config);
  double worst = 0.0;
  for (double t : {1.0, 5.0, 10.0}) {
    const FlowSample* a = sample_at(norm, t);
    const FlowSample* b = sample_at(unnorm, t);
    if (!a || !b) {
      v.check(false, fmt("samples at t=%g", t));
      continue;
    }
    const double total = total_weight(b->w);
    for (std::size_t i = 0; i < init.size(); ++i) worst = std::max(worst, std::abs(a->w[i] - b->w[i] / total));
  }
  v.check(worst <= 1e-5, fmt("max |w - w~/sum w~| at t=1,5,10: %.3e (<= 1e-5)", worst));
  return v;
}

// --- 10 ------------------------------------------------------------------
int linear_pieces(const std::vector<double>& x, const std::vector<double>& y, double tol) {
  int pieces = 0;
  std::size_t start = 0;
  while (start < x.size()) {
    std::size_t end = start + 1;
    // Greedily extend while every point lies on the chord through the ends.
    while (end + 1 < x.size()) {
      const std::size_t cand = end + 1;
      const double slope = (y[cand] - y[start]) / (x[cand] - x[start]);
      bool fits = true;
      for (std::size_t i = start; i <= cand; ++i)
        if (std::abs(y[start] + slope * (x[i] - x[start]) - y[i]) > tol) fits = false;
      if (!fits) break;
      end = cand;
    }
    ++pieces;
    start = end + 1;
    // The next piece starts at the point after the break; a lone trailing
    // point is a degenerate piece of its own.
  }
  return pieces;
}

Verdict limit_consistency(const ValidationOptions& o) {
  Verdict v;
  std::mt19937_64 rng(o.seed + 10);
  std::uniform_int_distribution<int> size(2, 8);
  const std::vector<double> tail = {0.99, 0.995, 0.999};
  std::vector<double> grid(20);
  for (int i = 0; i < 20; ++i) grid[i] = i / 19.0;
  double worst = 0.0;
  int max_pieces = 0, edges = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const auto g = orc::random_connected_graph(size(rng), 0.35, rng);
    const auto dm = all_pairs_distances(g);
    for (const auto& e : g.edges()) {
      const double lp = lly_curvature_lp(g, dm, Gamma::reciprocal(), e.u, e.v);
      const double ex = lly_curvature_extrapolated(g, dm, Gamma::reciprocal(), e.u, e.v, tail);
      worst = std::max(worst, std::abs(lp - ex));
    }
    const auto unit = orc::unit_weight(g);
    const auto udm = all_pairs_distances(unit);
    for (const auto& e : unit.edges()) {
      ++edges;
      std::vector<double> k;
      for (double a : grid) k.push_back(alpha_ricci(unit, udm, Gamma::reciprocal(), e.u, e.v, a));
      max_pieces = std::max(max_pieces, linear_pieces(grid, k, 1e-9));
    }
  }
  v.check(worst <= 1e-5, fmt("max |extrapolated - LP| %.3e on 20 graphs (<= 1e-5)", worst));
  v.check(max_pieces <= 3, fmt("at most %d linear pieces over %d unit-weight edges (<= 3)", max_pieces, edges));
  return v;
}

struct Entry {
  CriterionInfo info;
  std::function<Verdict(const ValidationOptions&)> run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {{1, "constant-regime"}, constant_regime},
      {{2, "stable-regime"}, stable_regime},
      {{3, "collapsing-regime"}, collapsing_regime},
      {{4, "path-convergence"}, path_convergence},
      {{5, "star-convergence"}, star_convergence},
      {{6, "unnormalized-collapse"}, unnormalized_collapse},
      {{7, "transport"}, transport},
      {{8, "curvature-bounds"}, curvature_bounds_check},
      {{9, "conservation"}, conservation},
      {{10, "limit-consistency"}, limit_consistency},
  };
  return entries;
}

bool selected(const CriterionInfo& c, const std::string& filter) {
  if (filter.empty()) return true;
  if (filter == std::to_string(c.id)) return true;
  return std::string(c.name).find(filter) != std::string::npos;
}

}  // namespace

const std::vector<CriterionInfo>& criteria() {
  static const std::vector<CriterionInfo> list = [] {
    std::vector<CriterionInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return list;
}

std::vector<CriterionResult> run_validation(const ValidationOptions& options) {
  std::vector<CriterionResult> results;
  for (const auto& entry : registry()) {
    if (!selected(entry.info, options.filter)) continue;
    CriterionResult r;
    r.id = entry.info.id;
    r.name = entry.info.name;
    const auto start = std::chrono::steady_clock::now();
    try {
      Verdict v = entry.run(options);
      r.pass = v.pass;
      r.detail = v.detail;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  return fmt("[%s] %2d %-22s (%6.2f s): ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds) + r.detail;
}

}  // namespace ricci::validation
