#include <doctest.h>

#include <cmath>
#include <random>

#include "ricci/error.hpp"
#include "ricci/flow.hpp"
#include "ricci/oracles/oracles.hpp"

using namespace ricci;
namespace orc = ricci::oracles;

namespace {

FlowConfig config_for(Gamma gamma, double h, double horizon) {
  FlowConfig c;
  c.gamma = gamma;
  c.step = h;
  c.horizon = horizon;
  return c;
}

}  // namespace

TEST_CASE("right-hand sides") {
  auto constant = orc::path_graph({0.3, 0.7});
  for (double d : rhs_normalized(constant, Gamma::reciprocal(), constant.weights())) CHECK(std::abs(d) <= 1e-15);

  auto dw = rhs_normalized(constant, Gamma::identity(), constant.weights());
  CHECK(dw[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(dw[1] == doctest::Approx(-0.4).epsilon(1e-12));

  auto star = orc::star_graph({0.5, 0.3, 0.2});
  auto ds = rhs_normalized(star, Gamma::reciprocal(), star.weights());
  const double w[] = {0.5, 0.3, 0.2};
  for (int i = 0; i < 3; ++i) CHECK(std::signbit(ds[i]) == std::signbit(1 / w[i] - 3));

  auto equal = orc::path_graph({0.5, 0.5});
  auto du = rhs_unnormalized(equal, Gamma::identity(), equal.weights());
  CHECK(du[0] == doctest::Approx(-0.5));
  CHECK(du[1] == doctest::Approx(-0.5));

  auto k2 = parse_edge_list("0 1 0.3");
  CHECK(rhs_unnormalized(k2, Gamma::reciprocal(), k2.weights())[0] == doctest::Approx(-0.6));

  // the normalized fixed point of a star is not fixed without the mean term
  auto fixed = orc::star_graph({1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(std::abs(rhs_normalized(fixed, Gamma::reciprocal(), fixed.weights())[0]) <= 1e-12);
  CHECK(rhs_unnormalized(fixed, Gamma::reciprocal(), fixed.weights())[0] < -0.1);
}

TEST_CASE("rhs refuses states violating the distance condition") {
  auto tri = parse_edge_list("0 1 0.2\n1 2 0.2\n0 2 0.6");
  CHECK_THROWS_AS(rhs_normalized(tri, Gamma::reciprocal(), tri.weights()), DistanceConditionViolated);
}

TEST_CASE("normalization identity and drift") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    auto g = orc::random_connected_graph(3 + rep % 5, 0.4, rng);
    auto w = g.weights();
    auto dm = all_pairs_distances(g);
    auto kappa = edge_curvatures(g, dm, Gamma::reciprocal());
    auto dw = rhs_normalized(g, Gamma::reciprocal(), w);
    double sum_dw = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) sum_dw += dw[i], mean += kappa[i] * w[i];
    CHECK(std::abs(sum_dw - (total_weight(w) - 1.0) * mean) <= 1e-10 * (1 + std::abs(mean) * total_weight(w)));
    auto f = edge_drift(kappa, w);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(std::abs(dw[i] - w[i] * f[i]) <= 1e-12);
  }
}

TEST_CASE("step") {
  auto constant = orc::path_graph({0.3, 0.7});
  auto config = config_for(Gamma::reciprocal(), 1e-3, 1.0);
  FlowState s{0.0, constant.weights(), 0.0};
  auto next = step(s, config, constant);
  CHECK(next.t == doctest::Approx(1e-3));
  CHECK(std::abs(next.w[0] - 0.3) <= 1e-12);

  auto stable = orc::path_graph({0.2, 0.8});
  config = config_for(Gamma::identity(), 1e-3, 1.0);
  FlowState st{0.0, stable.weights(), 0.0};
  for (int i = 0; i < 1000; ++i) st = step(st, config, stable);
  CHECK(std::abs(st.w[0] - (0.5 - 0.3 * std::exp(-2.0))) <= 1e-6);

  // Euler with a tiny step moves along the derivative
  config.integrator = Integrator::Euler;
  config.step = 1e-8;
  FlowState e{0.0, stable.weights(), 0.0};
  auto dw = rhs_normalized(stable, Gamma::identity(), stable.weights());
  auto e1 = step(e, config, stable);
  CHECK(e1.w[0] == doctest::Approx(0.2 + 1e-8 * dw[0]).epsilon(1e-15));
}

TEST_CASE("step halves to keep weights positive") {
  // unnormalized K2: dw/dt = -2w, so an Euler step of h >= 1/2 would go nonpositive
  auto k2 = parse_edge_list("0 1 1.0");
  auto config = config_for(Gamma::reciprocal(), 0.75, 10.0);
  config.mode = FlowMode::Unnormalized;
  config.integrator = Integrator::Euler;
  FlowState s{0.0, k2.weights(), 0.0};
  auto next = step(s, config, k2);
  CHECK(next.t == doctest::Approx(0.375));
  CHECK(next.w[0] == doctest::Approx(0.25));
}

TEST_CASE("integrate: stable regime and unnormalized decay") {
  auto stable = orc::path_graph({0.2, 0.8});
  auto config = config_for(Gamma::identity(), 1e-3, 2.0);
  config.sample_interval = 0.5;
  config.convergence_window = 1 << 30;
  auto traj = integrate(stable, config);
  CHECK(traj.reason == StopReason::Horizon);
  REQUIRE(traj.samples.size() == 5);
  for (const auto& s : traj.samples) {
    auto expected = orc::path2_solution(orc::Path2Regime::Stable, {0.2, 0.8}, s.t);
    CHECK(std::abs(s.w[0] - expected[0]) <= 1e-6);
  }

  auto k2 = parse_edge_list("0 1 0.5");
  config = config_for(Gamma::reciprocal(), 1e-3, 1.0);
  config.mode = FlowMode::Unnormalized;
  auto decay = integrate(k2, config);
  CHECK(decay.final_state.w[0] == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-9));
}

TEST_CASE("integrate: the three integrators agree on the stable regime") {
  auto stable = orc::path_graph({0.2, 0.8});
  for (auto integrator : {Integrator::RK4, Integrator::AdaptiveRK45, Integrator::Euler}) {
    auto config = config_for(Gamma::identity(), integrator == Integrator::Euler ? 1e-4 : 1e-2, 1.0);
    config.integrator = integrator;
    config.convergence_window = 1 << 30;
    auto traj = integrate(stable, config);
    const double tol = integrator == Integrator::Euler ? 1e-4 : 1e-8;
    CHECK(traj.final_state.t == doctest::Approx(1.0));
    CHECK(std::abs(traj.final_state.w[0] - (0.5 - 0.3 * std::exp(-2.0))) <= tol);
  }
}

TEST_CASE("integrate: star converges to the uniform weight") {
  auto star = orc::star_graph({0.5, 0.3, 0.2});
  auto config = config_for(Gamma::reciprocal(), 1e-2, 50.0);
  auto traj = integrate(star, config);
  for (double w : traj.final_state.w) CHECK(std::abs(w - 1.0 / 3) <= 1e-5);
  CHECK(std::abs(total_weight(traj.final_state.w) - 1.0) <= 1e-9);
}

TEST_CASE("integrate: star conservation at t=10 without projection") {
  auto star = orc::star_graph({0.5, 0.3, 0.2});
  auto config = config_for(Gamma::reciprocal(), 1e-3, 10.0);
  config.project_total_weight = false;
  config.convergence_window = 1 << 30;
  auto traj = integrate(star, config);
  for (const auto& s : traj.samples) CHECK(std::abs(total_weight(s.w) - 1.0) <= 1e-8);
  // positivity bound w(t) >= w(0) e^{(-2-2|E|)t}
  for (const auto& s : traj.samples)
    for (std::size_t i = 0; i < 3; ++i) CHECK(s.w[i] >= star.edge(i).w * std::exp(-8.0 * s.t));
}

TEST_CASE("integrate: path leaves shrink and interior edges grow") {
  std::mt19937_64 rng(37);
  auto g = orc::path_graph(orc::random_simplex_point(6, rng));
  auto config = config_for(Gamma::reciprocal(), 1e-2, 100.0);
  auto traj = integrate(g, config);
  REQUIRE(traj.reason == StopReason::Event);
  CHECK(traj.event->kind == SurgeryKind::ContractEdge);
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    const auto& a = traj.samples[k - 1].w;
    const auto& b = traj.samples[k].w;
    CHECK(b[0] < a[0]);
    CHECK(b[5] < a[5]);
    for (int i = 1; i < 5; ++i) CHECK(b[i] > a[i]);
  }
}

TEST_CASE("integrate: collapsing regime emits a contraction") {
  auto g = orc::path_graph({0.6, 0.4});
  auto config = config_for(Gamma::reciprocal_square(), 1e-3, 100.0);
  auto traj = integrate(g, config);
  REQUIRE(traj.event.has_value());
  CHECK(traj.event->kind == SurgeryKind::ContractEdge);
  CHECK(traj.event->u == 1);
  CHECK(traj.event->v == 2);
  CHECK(traj.final_state.w[1] < config.merge_threshold);
  CHECK(traj.final_state.w[1] > 0.9 * config.merge_threshold);
  CHECK(std::abs(traj.event->t - orc::path2_collapse_time({0.6, 0.4}, 1e-3)) <= 2e-3);
  // limits of the collapsing regime: the vanishing edge tends to 2, the other to 1
  const auto& last = traj.samples.back();
  CHECK(std::abs(last.kappa[1] - 2.0) <= 2e-3);
  CHECK(std::abs(last.kappa[0] - 1.0) <= 2e-3);
}

TEST_CASE("event detection") {
  auto tri = parse_edge_list("0 1 0.2\n1 2 0.2\n0 2 0.6");
  auto ev = detect_event(tri, all_pairs_distances(tri), 1e-3, 0.0);
  REQUIRE(ev.has_value());
  CHECK(ev->kind == SurgeryKind::DeleteEdge);
  CHECK(ev->u == 0);
  CHECK(ev->v == 2);

  // exactly tight alternative path is not a violation
  auto tight = parse_edge_list("0 1 0.25\n1 2 0.25\n0 2 0.5");
  CHECK_FALSE(detect_event(tight, all_pairs_distances(tight), 1e-3, 0.0).has_value());

  auto small = parse_edge_list("0 1 0.5\n1 2 0.0005");
  auto c = detect_event(small, all_pairs_distances(small), 1e-3, 1.5);
  REQUIRE(c.has_value());
  CHECK(c->kind == SurgeryKind::ContractEdge);
  CHECK(c->t == 1.5);
  CHECK_FALSE(detect_event(small, all_pairs_distances(small), 5e-4, 0.0).has_value());

  // an edge meeting both conditions is deleted
  auto both = parse_edge_list("0 1 0.0005\n0 2 0.0001\n1 2 0.0001");
  auto b = detect_event(both, all_pairs_distances(both), 1e-3, 0.0);
  REQUIRE(b.has_value());
  CHECK(b->kind == SurgeryKind::DeleteEdge);
  CHECK(b->u == 0);
  CHECK(b->v == 1);
}

TEST_CASE("config validation") {
  FlowConfig c;
  c.step = 0;
  CHECK_THROWS(c.validate());
  c = FlowConfig{};
  c.merge_threshold = -1;
  CHECK_THROWS(c.validate());
  c = FlowConfig{};
  c.horizon = 0;
  CHECK_THROWS(c.validate());
  CHECK_NOTHROW(FlowConfig{}.validate());
}
