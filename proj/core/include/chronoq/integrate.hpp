#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "chronoq/model.hpp"

namespace chronoq {

enum class Method { FixedRk4, Adaptive45 };
enum class Direction { Forward, Backward };

std::string_view to_string(Method m);
std::string_view to_string(Direction d);
/// Accepts "fixed_rk4" / "rk4" and "adaptive_45" / "rk45"; throws UsageError otherwise.
Method parse_method(std::string_view name);

struct IntegratorConfig {
  Method method = Method::FixedRk4;
  double dt = 0.01;         // fixed step, or the first trial step when adaptive
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int sample_stride = 10;   // keep every k-th accepted step

  void validate() const;

  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

struct Trajectory {
  std::vector<TimedState> samples;
  SystemParameters params;
  Direction direction = Direction::Forward;
  IntegratorConfig config;

  const TimedState& front() const { return samples.front(); }
  const TimedState& back() const { return samples.back(); }
};

/// Whether evolve() insists on a unit-norm initial state.
enum class NormCheck { Enforce, Skip };

/// Integrate dC/dt = -i M(t) C from t_start to t_end. t_end < t_start runs
/// the same equation with negative steps. The last step is shortened so the
/// final sample sits exactly on t_end.
///
/// Throws UsageError on bad inputs, DivergenceError when the adaptive step
/// underflows 1e-14 * |t_end - t_start|, NumericalError on non-finite state.
Trajectory evolve(const SystemParameters& params, const TwoQubitState& initial, double t_start,
                  double t_end, const IntegratorConfig& config,
                  NormCheck norm_check = NormCheck::Enforce);

/// Max |C_k - C_k(0)| after evolving 0 -> T -> 0.
double roundtrip_residual(const SystemParameters& params, const TwoQubitState& initial, double T,
                          const IntegratorConfig& config);

/// Largest |norm^2 - 1| over the samples.
double max_norm_error(const Trajectory& trajectory);

struct ConvergencePoint {
  double dt = 0.0;
  double error = 0.0;
  bool used = false;  // false when below the rounding floor
};

struct ConvergenceStudy {
  double order = 0.0;
  std::vector<ConvergencePoint> points;
};

/// Errors below this are treated as rounding noise and left out of the fit.
inline constexpr double kRoundingFloor = 1e-13;

/// Fixed-step RK4 errors at time T against the extrapolated propagator
/// reference, and the least-squares slope of log(error) over log(dt).
/// dt_sequence must be strictly decreasing with at least three entries.
/// Throws InconclusiveError if fewer than two errors clear the rounding floor.
ConvergenceStudy convergence_order(const SystemParameters& params, const TwoQubitState& initial,
                                   double T, std::span<const double> dt_sequence);

/// Least-squares slope of log(error) against log(dt) over the used points.
double fit_log_slope(std::span<const ConvergencePoint> points);

}  // namespace chronoq
