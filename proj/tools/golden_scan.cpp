// Oracle-only scan for the first |10> -> |11> population peak. Its output is
// frozen into the golden values used by the test suites; it never touches
// the Runge-Kutta integrator.

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "chronoq/model.hpp"
#include "chronoq/oracle.hpp"

int main(int argc, char** argv) {
  using namespace chronoq;

  const double horizon = argc > 1 ? std::atof(argv[1]) : 1000.0;
  const double floor = argc > 2 ? std::atof(argv[2]) : 0.5;
  const PropagatorConfig cfg{0.001};
  const long long every = 100;  // 0.1 time units between kept samples

  const SystemParameters params = kPaperDefaults;
  const auto start = TwoQubitState::basis(2);
  const auto samples = propagator_samples(params, start, 0.0, horizon, cfg, every);

  auto p3 = [&](std::size_t i) { return std::norm(samples[i].state[3]); };
  std::size_t hit = 0;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    if (p3(i) >= floor && p3(i - 1) < p3(i) && p3(i) >= p3(i + 1)) {
      hit = i;
      break;
    }
  }
  if (hit == 0) {
    std::printf("no peak above %.3f within %.1f\n", floor, horizon);
    return 1;
  }

  // Parabola through the three samples around the peak.
  const double h = samples[hit].t - samples[hit - 1].t;
  const double a = p3(hit - 1), b = p3(hit), c = p3(hit + 1);
  const double offset = 0.5 * h * (a - c) / (a - 2.0 * b + c);
  const double t_star = samples[hit].t + offset;

  const auto at_peak = evolve_propagator(params, start, 0.0, t_star, cfg);
  const auto fine = evolve_propagator_extrapolated(params, start, 0.0, t_star, cfg);
  std::printf("sample_peak_t %.17g\nsample_peak_p %.17g\n", samples[hit].t, b);
  std::printf("T_star %.17g\npeak_star %.17g\npeak_star_extrapolated %.17g\n", t_star,
              std::norm(at_peak[3]), std::norm(fine[3]));
  for (std::size_t k = 0; k < 4; ++k) {
    std::printf("p%zu %.17g\n", k, std::norm(at_peak[k]));
  }
  return 0;
}
