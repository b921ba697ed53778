#include "chronoq/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chronoq/errors.hpp"
#include "chronoq/oracle.hpp"

namespace chronoq {

std::string_view to_string(Method m) {
  return m == Method::FixedRk4 ? "fixed_rk4" : "adaptive_45";
}

std::string_view to_string(Direction d) {
  return d == Direction::Forward ? "forward" : "backward";
}

Method parse_method(std::string_view name) {
  if (name == "fixed_rk4" || name == "rk4") return Method::FixedRk4;
  if (name == "adaptive_45" || name == "rk45") return Method::Adaptive45;
  throw UsageError("unknown integration method '" + std::string(name) + "'");
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw UsageError("dt must be a finite positive number");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw UsageError("tolerances must be positive");
  if (sample_stride < 1) throw UsageError("sample_stride must be >= 1");
}

namespace {

constexpr Complex kMinusI{0.0, -1.0};

// y + h * sum(w_i * k_i)
template <std::size_t N>
TwoQubitState combine(const TwoQubitState& y, double h, const std::array<double, N>& weights,
                      const std::array<const TwoQubitState*, N>& stages) {
  TwoQubitState out = y;
  for (std::size_t k = 0; k < 4; ++k) {
    Complex acc = 0.0;
    for (std::size_t s = 0; s < N; ++s) {
      if (weights[s] != 0.0) acc += weights[s] * (*stages[s])[k];
    }
    out[k] += h * acc;
  }
  return out;
}

TwoQubitState derivative(const HamiltonianMatrix& m, const TwoQubitState& y) {
  auto d = m.apply(y);
  d *= kMinusI;
  return d;
}

TwoQubitState rk4_step(const SystemParameters& p, double t, double h, const TwoQubitState& y) {
  const auto m0 = hamiltonian(p, t);
  const auto mh = hamiltonian(p, t + 0.5 * h);
  const auto m1 = hamiltonian(p, t + h);

  const auto k1 = derivative(m0, y);
  const auto k2 = derivative(mh, combine<1>(y, 0.5 * h, {1.0}, {&k1}));
  const auto k3 = derivative(mh, combine<1>(y, 0.5 * h, {1.0}, {&k2}));
  const auto k4 = derivative(m1, combine<1>(y, h, {1.0}, {&k3}));
  return combine<4>(y, h / 6.0, {1.0, 2.0, 2.0, 1.0}, {&k1, &k2, &k3, &k4});
}

void check_finite(const TwoQubitState& y, double t) {
  if (!y.is_finite()) {
    throw NumericalError("non-finite amplitude encountered at t = " + std::to_string(t));
  }
}

class Recorder {
 public:
  Recorder(Trajectory& traj, int stride) : traj_(traj), stride_(stride) {}

  void accepted(double t, const TwoQubitState& y, bool last) {
    ++count_;
    if (last || count_ % stride_ == 0) traj_.samples.push_back({t, y});
  }

 private:
  Trajectory& traj_;
  int stride_;
  long long count_ = 0;
};

void run_fixed(const SystemParameters& p, double t_start, double t_end, const IntegratorConfig& cfg,
               TwoQubitState y, Recorder& rec) {
  const double span = std::abs(t_end - t_start);
  const double sign = t_end > t_start ? 1.0 : -1.0;
  const double ratio = span / cfg.dt;
  const double nearest = std::round(ratio);
  const long long steps = std::abs(ratio - nearest) <= 1e-6
                              ? std::max(1LL, static_cast<long long>(nearest))
                              : static_cast<long long>(std::floor(ratio)) + 1;

  // Times come from n*dt rather than accumulation so a backward run visits
  // exactly the negated grid of the matching forward run.
  double t = t_start;
  for (long long n = 1; n <= steps; ++n) {
    const double t_next = n == steps ? t_end : t_start + sign * (static_cast<double>(n) * cfg.dt);
    y = rk4_step(p, t, t_next - t, y);
    check_finite(y, t_next);
    rec.accepted(t_next, y, n == steps);
    t = t_next;
  }
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr std::array<double, 1> a2{1.0 / 5};
constexpr std::array<double, 2> a3{3.0 / 40, 9.0 / 40};
constexpr std::array<double, 3> a4{44.0 / 45, -56.0 / 15, 32.0 / 9};
constexpr std::array<double, 4> a5{19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
constexpr std::array<double, 5> a6{9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                                   -5103.0 / 18656};
constexpr std::array<double, 6> b5{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                                   11.0 / 84};
constexpr std::array<double, 7> err_w{71.0 / 57600,  0.0,          -71.0 / 16695, 71.0 / 1920,
                                      -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

void run_adaptive(const SystemParameters& p, double t_start, double t_end,
                  const IntegratorConfig& cfg, TwoQubitState y, Recorder& rec) {
  const double span = std::abs(t_end - t_start);
  const double sign = t_end > t_start ? 1.0 : -1.0;
  const double h_floor = 1e-14 * span;

  double t = t_start;
  double h = sign * std::min(cfg.dt, span);
  auto k1 = rhs(p, t, y);

  for (;;) {
    bool last = false;
    if (std::abs(h) >= std::abs(t_end - t)) {
      h = t_end - t;
      last = true;
    }
    if (std::abs(h) < h_floor) {
      throw DivergenceError("adaptive step underflow at t = " + std::to_string(t));
    }

    const auto k2 = rhs(p, t + c2 * h, combine<1>(y, h, a2, {&k1}));
    const auto k3 = rhs(p, t + c3 * h, combine<2>(y, h, a3, {&k1, &k2}));
    const auto k4 = rhs(p, t + c4 * h, combine<3>(y, h, a4, {&k1, &k2, &k3}));
    const auto k5 = rhs(p, t + c5 * h, combine<4>(y, h, a5, {&k1, &k2, &k3, &k4}));
    const auto k6 = rhs(p, t + h, combine<5>(y, h, a6, {&k1, &k2, &k3, &k4, &k5}));
    const auto y_new = combine<6>(y, h, b5, {&k1, &k2, &k3, &k4, &k5, &k6});
    check_finite(y_new, t + h);
    const auto t_new = last ? t_end : t + h;
    const auto k7 = rhs(p, t_new, y_new);

    const TwoQubitState zero{};
    const auto err =
        combine<7>(zero, h, err_w, {&k1, &k2, &k3, &k4, &k5, &k6, &k7});
    double err_norm = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[k]), std::abs(y_new[k]));
      err_norm = std::max(err_norm, std::abs(err[k]) / scale);
    }

    const double factor =
        err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
    if (err_norm <= 1.0) {
      t = t_new;
      y = y_new;
      k1 = k7;
      rec.accepted(t, y, last);
      if (last) return;
      h *= factor;
    } else {
      h *= std::min(factor, 1.0);
    }
  }
}

}  // namespace

Trajectory evolve(const SystemParameters& params, const TwoQubitState& initial, double t_start,
                  double t_end, const IntegratorConfig& config, NormCheck norm_check) {
  params.validate();
  config.validate();
  if (!std::isfinite(t_start) || !std::isfinite(t_end)) throw UsageError("times must be finite");
  if (t_start == t_end) throw UsageError("t_start and t_end must differ");
  if (!initial.is_finite()) throw UsageError("initial state must be finite");
  if (norm_check == NormCheck::Enforce && std::abs(initial.norm2() - 1.0) > 1e-12) {
    throw UsageError("initial state must be normalized to within 1e-12");
  }

  Trajectory traj;
  traj.params = params;
  traj.config = config;
  traj.direction = t_end > t_start ? Direction::Forward : Direction::Backward;
  traj.samples.push_back({t_start, initial});

  Recorder rec(traj, config.sample_stride);
  if (config.method == Method::FixedRk4) {
    run_fixed(params, t_start, t_end, config, initial, rec);
  } else {
    run_adaptive(params, t_start, t_end, config, initial, rec);
  }
  return traj;
}

double roundtrip_residual(const SystemParameters& params, const TwoQubitState& initial, double T,
                          const IntegratorConfig& config) {
  if (!(T > 0.0)) throw UsageError("round-trip horizon T must be positive");
  const auto out = evolve(params, initial, 0.0, T, config);
  const auto back = evolve(params, out.back().state, T, 0.0, config, NormCheck::Skip);
  return max_amplitude_distance(initial, back.back().state);
}

double max_norm_error(const Trajectory& trajectory) {
  double worst = 0.0;
  for (const auto& s : trajectory.samples) worst = std::max(worst, std::abs(s.state.norm2() - 1.0));
  return worst;
}

double fit_log_slope(std::span<const ConvergencePoint> points) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& pt : points) {
    if (!pt.used) continue;
    const double x = std::log(pt.dt);
    const double y = std::log(pt.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw InconclusiveError("fewer than two errors above the rounding floor");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceStudy convergence_order(const SystemParameters& params, const TwoQubitState& initial,
                                   double T, std::span<const double> dt_sequence) {
  if (dt_sequence.size() < 3) throw UsageError("need at least three step sizes");
  for (std::size_t i = 1; i < dt_sequence.size(); ++i) {
    if (!(dt_sequence[i] < dt_sequence[i - 1])) {
      throw UsageError("step sizes must be strictly decreasing");
    }
  }
  if (!(T > 0.0)) throw UsageError("T must be positive");

  const auto reference = evolve_propagator_extrapolated(params, initial, 0.0, T, PropagatorConfig{});

  ConvergenceStudy study;
  for (double dt : dt_sequence) {
    IntegratorConfig cfg;
    cfg.method = Method::FixedRk4;
    cfg.dt = dt;
    cfg.sample_stride = 1 << 30;
    const auto traj = evolve(params, initial, 0.0, T, cfg);
    const double err = max_amplitude_distance(traj.back().state, reference);
    study.points.push_back({dt, err, err >= kRoundingFloor});
  }
  study.order = fit_log_slope(study.points);
  return study;
}

}  // namespace chronoq
