#include "ricci/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ricci/error.hpp"

namespace ricci {

namespace {

constexpr int kMaxHalvings = 40;
constexpr double kConditionOneSlack = 1e-12;
constexpr double kTimeEps = 1e-12;
constexpr double kSimplexSlack = 1e-9;

std::vector<double> derivative(FlowMode mode, std::span<const double> kappa, std::span<const double> w) {
  std::vector<double> dw(w.size());
  double mean = 0.0;
  if (mode == FlowMode::Normalized)
    for (std::size_t i = 0; i < w.size(); ++i) mean += kappa[i] * w[i];
  for (std::size_t i = 0; i < w.size(); ++i) dw[i] = -kappa[i] * w[i] + w[i] * mean;
  return dw;
}

std::vector<double> kappa_at(const WeightedGraph& g, const Gamma& gamma, std::span<const double> w, bool check) {
  auto gw = g.with_weights(w);
  auto dm = all_pairs_distances(gw);
  return edge_curvatures(gw, dm, gamma, check);
}

std::vector<double> rhs(const WeightedGraph& g, const FlowConfig& c, std::span<const double> w, bool check) {
  return derivative(c.mode, kappa_at(g, c.gamma, w, check), w);
}

bool all_positive(std::span<const double> w) {
  return std::all_of(w.begin(), w.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
}

std::vector<double> axpy(std::span<const double> w, double h, std::span<const double> k) {
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] + h * k[i];
  return out;
}

struct Trial {
  std::vector<double> w;
  double error = 0.0;  // RK45 only: scaled local error estimate
  bool ok = false;
};

// Stage evaluation that reports a nonpositive trial weight instead of throwing.
bool stage(const WeightedGraph& g, const FlowConfig& c, std::span<const double> w, std::vector<double>& out) {
  if (!all_positive(w)) return false;
  out = rhs(g, c, w, false);
  return true;
}

Trial try_step(const WeightedGraph& g, const FlowConfig& c, std::span<const double> w,
               std::span<const double> k1, double h) {
  Trial t;
  switch (c.integrator) {
    case Integrator::Euler: {
      t.w = axpy(w, h, k1);
      break;
    }
    case Integrator::RK4: {
      std::vector<double> k2, k3, k4;
      if (!stage(g, c, axpy(w, 0.5 * h, k1), k2)) return t;
      if (!stage(g, c, axpy(w, 0.5 * h, k2), k3)) return t;
      if (!stage(g, c, axpy(w, h, k3), k4)) return t;
      t.w.resize(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) t.w[i] = w[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      break;
    }
    case Integrator::AdaptiveRK45: {
      // Dormand-Prince 5(4)
      static constexpr double a21 = 1.0 / 5;
      static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
      static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
      static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
      static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                              a65 = -5103.0 / 18656;
      static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                              b6 = 11.0 / 84;
      static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                              e6 = 22.0 / 525, e7 = -1.0 / 40;
      const std::size_t n = w.size();
      std::vector<double> k2, k3, k4, k5, k6, k7, y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = w[i] + h * a21 * k1[i];
      if (!stage(g, c, y, k2)) return t;
      for (std::size_t i = 0; i < n; ++i) y[i] = w[i] + h * (a31 * k1[i] + a32 * k2[i]);
      if (!stage(g, c, y, k3)) return t;
      for (std::size_t i = 0; i < n; ++i) y[i] = w[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      if (!stage(g, c, y, k4)) return t;
      for (std::size_t i = 0; i < n; ++i) y[i] = w[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      if (!stage(g, c, y, k5)) return t;
      for (std::size_t i = 0; i < n; ++i)
        y[i] = w[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      if (!stage(g, c, y, k6)) return t;
      for (std::size_t i = 0; i < n; ++i)
        y[i] = w[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      if (!stage(g, c, y, k7)) return t;
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double scale = c.rk45_tolerance * (1.0 + std::max(std::abs(w[i]), std::abs(y[i])));
        err = std::max(err, std::abs(e) / scale);
      }
      t.w = std::move(y);
      t.error = err;
      break;
    }
  }
  t.ok = all_positive(t.w);
  return t;
}

// Advances from `state` using the precomputed derivative k1. `h_cap` clips the
// step so samples and the horizon land on step boundaries.
FlowState advance(const WeightedGraph& g, const FlowConfig& c, const FlowState& state,
                  std::span<const double> k1, double h_cap) {
  double h = c.step;
  if (c.integrator == Integrator::AdaptiveRK45 && state.h_hint > 0.0) h = state.h_hint;
  h = std::min(h, h_cap);
  for (int halvings = 0; halvings <= kMaxHalvings;) {
    Trial trial = try_step(g, c, state.w, k1, h);
    if (!trial.ok) {
      h *= 0.5;
      ++halvings;
      continue;
    }
    FlowState next;
    next.t = state.t + h;
    next.w = std::move(trial.w);
    if (c.integrator == Integrator::AdaptiveRK45) {
      const double factor = trial.error == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(trial.error, -0.2), 0.2, 5.0);
      if (trial.error > 1.0) {
        h *= factor;
        if (h < c.step * std::ldexp(1.0, -kMaxHalvings) && h < 1e-14) break;
        continue;  // rejected on accuracy; not counted against positivity halvings
      }
      next.h_hint = h * factor;
    }
    return next;
  }
  throw StepUnderflow("cannot keep all weights positive at t=" + std::to_string(state.t));
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

void FlowConfig::validate() const {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  if (!(merge_threshold > 0.0)) throw std::invalid_argument("merge threshold must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(sample_interval > 0.0)) throw std::invalid_argument("sample interval must be positive");
  if (!(convergence_tolerance > 0.0)) throw std::invalid_argument("convergence tolerance must be positive");
  if (convergence_window < 1) throw std::invalid_argument("convergence window must be at least 1");
  if (!(rk45_tolerance > 0.0)) throw std::invalid_argument("rk45 tolerance must be positive");
}

std::vector<double> rhs_normalized(const WeightedGraph& g, const Gamma& gamma, std::span<const double> w) {
  return derivative(FlowMode::Normalized, kappa_at(g, gamma, w, true), w);
}

std::vector<double> rhs_unnormalized(const WeightedGraph& g, const Gamma& gamma, std::span<const double> w) {
  return derivative(FlowMode::Unnormalized, kappa_at(g, gamma, w, true), w);
}

std::vector<double> edge_drift(std::span<const double> kappa, std::span<const double> w) {
  double mean = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) mean += kappa[i] * w[i];
  std::vector<double> f(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) f[i] = mean - kappa[i];
  return f;
}

FlowState step(const FlowState& state, const FlowConfig& config, const WeightedGraph& g) {
  config.validate();
  auto k1 = rhs(g, config, state.w, true);
  return advance(g, config, state, k1, std::numeric_limits<double>::infinity());
}

double total_weight(std::span<const double> w) {
  double s = 0.0;
  for (double x : w) s += x;
  return s;
}

std::string to_string(SurgeryKind kind) { return kind == SurgeryKind::DeleteEdge ? "delete" : "contract"; }

SurgeryKind surgery_kind_from_string(const std::string& s) {
  if (s == "delete") return SurgeryKind::DeleteEdge;
  if (s == "contract") return SurgeryKind::ContractEdge;
  throw ParseError("unknown surgery kind '" + s + "'");
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Horizon:
      return "horizon";
    case StopReason::Converged:
      return "converged";
    case StopReason::Event:
      return "event";
  }
  return {};
}

std::optional<FlowEvent> detect_event(const WeightedGraph& g, const DistanceMatrix& dm, double merge_threshold,
                                      double t) {
  for (const auto& e : g.edges()) {
    if (e.w - dm(e.u, e.v) > kConditionOneSlack) return FlowEvent{t, SurgeryKind::DeleteEdge, e.u, e.v};
    if (e.w < merge_threshold) return FlowEvent{t, SurgeryKind::ContractEdge, e.u, e.v};
  }
  return std::nullopt;
}

FlowTrajectory integrate(const WeightedGraph& g, const FlowConfig& config, double t0) {
  config.validate();
  FlowTrajectory traj;
  traj.edges.assign(g.edges().begin(), g.edges().end());

  FlowState state;
  state.t = t0;
  state.w = g.weights();
  const double t_end = t0 + config.horizon;
  const bool project = config.project_total_weight && config.mode == FlowMode::Normalized &&
                       std::abs(total_weight(state.w) - 1.0) <= kSimplexSlack;
  double next_sample = t0;
  std::size_t sample_index = 0;
  int calm = 0;

  auto record = [&](const std::vector<double>& kappa) {
    if (!traj.samples.empty() && traj.samples.back().t >= state.t) return;
    traj.samples.push_back({state.t, state.w, kappa});
  };

  while (true) {
    auto gw = g.with_weights(state.w);
    auto dm = all_pairs_distances(gw);
    if (auto ev = detect_event(gw, dm, config.merge_threshold, state.t)) {
      record(edge_curvatures(gw, dm, config.gamma, false));
      traj.reason = StopReason::Event;
      traj.event = ev;
      break;
    }
    auto kappa = edge_curvatures(gw, dm, config.gamma, true);
    auto k1 = derivative(config.mode, kappa, state.w);
    traj.final_max_derivative = max_abs(k1);

    if (state.t >= next_sample - kTimeEps) {
      record(kappa);
      // grid points are t0 + k * interval, not accumulated sums
      while (next_sample <= state.t + kTimeEps) next_sample = t0 + static_cast<double>(++sample_index) * config.sample_interval;
    }
    calm = traj.final_max_derivative < config.convergence_tolerance ? calm + 1 : 0;
    if (calm >= config.convergence_window) {
      record(kappa);
      traj.reason = StopReason::Converged;
      break;
    }
    if (state.t >= t_end - kTimeEps) {
      record(kappa);
      traj.reason = StopReason::Horizon;
      break;
    }
    double h_cap = t_end - state.t;
    if (next_sample - state.t > kTimeEps) h_cap = std::min(h_cap, next_sample - state.t);
    state = advance(g, config, state, k1, h_cap);
    if (project) {
      const double total = total_weight(state.w);
      for (double& x : state.w) x /= total;
    }
    // snap onto the sample grid / horizon when the clipped step landed there
    if (std::abs(state.t - next_sample) <= kTimeEps) state.t = next_sample;
    if (std::abs(state.t - t_end) <= kTimeEps) state.t = t_end;
    ++traj.steps;
  }
  traj.final_state = state;
  return traj;
}

}  // namespace ricci
