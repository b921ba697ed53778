#pragma once

#include <array>
#include <optional>
#include <vector>

#include "chronoq/integrate.hpp"
#include "chronoq/model.hpp"

namespace chronoq {

using Populations = std::array<double, 4>;

Populations populations(const TwoQubitState& state);

/// |10>: the control qubit set, target clear.
TwoQubitState cnot_initial();

/// Population of |11> a gate run is judged on.
inline constexpr std::size_t kTargetIndex = 3;

struct GatePeak {
  double time = 0.0;
  double peak = 0.0;
};

/// Result of scanning one trajectory for the first qualifying |11> maximum.
struct GateScan {
  std::optional<GatePeak> gate;
  double best_peak = 0.0;  // largest sampled |C3|^2, qualifying or not
  double best_time = 0.0;
  double sample_interval = 0.0;  // largest spacing between samples
};

/// First local maximum of |C3|^2 with value >= threshold, refined by a
/// parabola through the sample and its two neighbours. The refined time is
/// clamped to those neighbours.
GateScan scan_gate_peak(const Trajectory& trajectory, double threshold);

/// Vertex of the parabola through three points, clamped to [t0, t2].
GatePeak parabolic_vertex(double t0, double p0, double t1, double p1, double t2, double p2);

/// Forward scan from cnot_initial() over [0, horizon]. Absent if no sample
/// reaches threshold. threshold must lie in (0, 1].
std::optional<GatePeak> find_gate_time(const SystemParameters& params,
                                       const IntegratorConfig& config, double horizon,
                                       double threshold);

struct GateProbeReport {
  double gate_time = 0.0;
  double threshold = 0.0;
  double scan_peak = 0.0;  // parabolic estimate from the scan
  double peak_population_forward = 0.0;
  double peak_population_backward = 0.0;
  std::array<double, 3> residual_populations_forward{};
  std::array<double, 3> residual_populations_backward{};
  double max_norm_error = 0.0;
  double mirror_residual = 0.0;
};

/// Detect T, then evolve |10> to +T and to -T and compare the endpoints.
/// Throws DetectionError (carrying the best peak seen) if no gate is found.
GateProbeReport cnot_probe(const SystemParameters& params, const IntegratorConfig& config,
                           double horizon, double threshold);

struct BasisRow {
  std::size_t basis = 0;
  Populations forward{};
  Populations backward{};
  double max_norm_error = 0.0;
  double mirror_residual = 0.0;
};

/// Endpoint populations at +T and -T for each computational basis input.
std::array<BasisRow, 4> basis_sweep(const SystemParameters& params, double T,
                                    const IntegratorConfig& config);

/// max over samples and k of | |C_k(-t)|^2 - |C_k(t)|^2 |. The backward run
/// must be the sign-flipped counterpart of the forward one (same grid).
double mirror_residual(const Trajectory& forward, const Trajectory& backward);

}  // namespace chronoq
