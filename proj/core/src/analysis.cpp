#include "chronoq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chronoq/errors.hpp"

namespace chronoq {

Populations populations(const TwoQubitState& state) {
  return {std::norm(state[0]), std::norm(state[1]), std::norm(state[2]), std::norm(state[3])};
}

TwoQubitState cnot_initial() { return TwoQubitState::basis(2); }

GatePeak parabolic_vertex(double t0, double p0, double t1, double p1, double t2, double p2) {
  // Newton form: p(t) = p0 + d01 (t - t0) + d012 (t - t0)(t - t1)
  const double d01 = (p1 - p0) / (t1 - t0);
  const double d12 = (p2 - p1) / (t2 - t1);
  const double d012 = (d12 - d01) / (t2 - t0);
  if (!(d012 < 0.0)) return {t1, p1};  // flat or convex: no interior maximum

  const double t = std::clamp(0.5 * (t0 + t1) - d01 / (2.0 * d012), std::min(t0, t2),
                              std::max(t0, t2));
  const double p = p0 + d01 * (t - t0) + d012 * (t - t0) * (t - t1);
  return {t, std::max(p, p1)};
}

GateScan scan_gate_peak(const Trajectory& trajectory, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw UsageError("threshold must lie in (0, 1]");

  const auto& s = trajectory.samples;
  GateScan scan;
  std::vector<double> p(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    p[i] = std::norm(s[i].state[kTargetIndex]);
    if (p[i] > scan.best_peak) {
      scan.best_peak = p[i];
      scan.best_time = s[i].t;
    }
    if (i > 0) scan.sample_interval = std::max(scan.sample_interval, std::abs(s[i].t - s[i - 1].t));
  }

  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (p[i] >= threshold && p[i - 1] < p[i] && p[i] >= p[i + 1]) {
      scan.gate = parabolic_vertex(s[i - 1].t, p[i - 1], s[i].t, p[i], s[i + 1].t, p[i + 1]);
      break;
    }
  }
  return scan;
}

namespace {

GateScan forward_scan(const SystemParameters& params, const IntegratorConfig& config,
                      double horizon, double threshold) {
  if (!(horizon > 0.0)) throw UsageError("horizon must be positive");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw UsageError("threshold must lie in (0, 1]");
  return scan_gate_peak(evolve(params, cnot_initial(), 0.0, horizon, config), threshold);
}

std::array<double, 3> residuals(const Populations& pops) { return {pops[0], pops[1], pops[2]}; }

double endpoint_mirror(const TwoQubitState& plus, const TwoQubitState& minus) {
  const auto a = populations(plus);
  const auto b = populations(minus);
  double worst = 0.0;
  for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

}  // namespace

std::optional<GatePeak> find_gate_time(const SystemParameters& params,
                                       const IntegratorConfig& config, double horizon,
                                       double threshold) {
  return forward_scan(params, config, horizon, threshold).gate;
}

GateProbeReport cnot_probe(const SystemParameters& params, const IntegratorConfig& config,
                           double horizon, double threshold) {
  const auto scan = forward_scan(params, config, horizon, threshold);
  if (!scan.gate) {
    throw DetectionError("no |11> population peak >= " + std::to_string(threshold) +
                             " within horizon " + std::to_string(horizon),
                         scan.best_peak, scan.best_time);
  }

  const double T = scan.gate->time;
  const auto fwd = evolve(params, cnot_initial(), 0.0, T, config);
  const auto bwd = evolve(params, cnot_initial(), 0.0, -T, config);
  const auto& plus = fwd.back().state;
  const auto& minus = bwd.back().state;

  GateProbeReport r;
  r.gate_time = T;
  r.threshold = threshold;
  r.scan_peak = scan.gate->peak;
  r.peak_population_forward = populations(plus)[kTargetIndex];
  r.peak_population_backward = populations(minus)[kTargetIndex];
  r.residual_populations_forward = residuals(populations(plus));
  r.residual_populations_backward = residuals(populations(minus));
  r.max_norm_error = std::max(max_norm_error(fwd), max_norm_error(bwd));
  r.mirror_residual = endpoint_mirror(plus, minus);
  return r;
}

std::array<BasisRow, 4> basis_sweep(const SystemParameters& params, double T,
                                    const IntegratorConfig& config) {
  if (!(T > 0.0)) throw UsageError("basis sweep time must be positive");
  std::array<BasisRow, 4> rows;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto fwd = evolve(params, TwoQubitState::basis(k), 0.0, T, config);
    const auto bwd = evolve(params, TwoQubitState::basis(k), 0.0, -T, config);
    rows[k].basis = k;
    rows[k].forward = populations(fwd.back().state);
    rows[k].backward = populations(bwd.back().state);
    rows[k].max_norm_error = std::max(max_norm_error(fwd), max_norm_error(bwd));
    rows[k].mirror_residual = mirror_residual(fwd, bwd);
  }
  return rows;
}

double mirror_residual(const Trajectory& forward, const Trajectory& backward) {
  if (forward.samples.size() != backward.samples.size()) {
    throw UsageError("mirror comparison needs trajectories with matching sample grids");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < forward.samples.size(); ++i) {
    const auto& f = forward.samples[i];
    const auto& b = backward.samples[i];
    if (std::abs(f.t + b.t) > 1e-9 * std::max(1.0, std::abs(f.t))) {
      throw UsageError("mirror comparison needs t and -t sample pairs");
    }
    worst = std::max(worst, endpoint_mirror(f.state, b.state));
  }
  return worst;
}

}  // namespace chronoq
