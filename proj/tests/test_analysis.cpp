#include <doctest.h>

#include <cmath>
#include <random>

#include "chronoq/analysis.hpp"
#include "chronoq/errors.hpp"
#include "generators.hpp"
#include "golden.hpp"

using namespace chronoq;

TEST_CASE("populations") {
  const auto basis = populations(TwoQubitState::basis(2));
  CHECK(basis == Populations{0.0, 0.0, 1.0, 0.0});

  TwoQubitState even;
  for (std::size_t k = 0; k < 4; ++k) even[k] = 0.5;
  CHECK(populations(even) == Populations{0.25, 0.25, 0.25, 0.25});

  TwoQubitState s;
  s[0] = 0.6;
  s[1] = Complex(0.0, 0.8);
  const auto p = populations(s);
  CHECK(p[0] == doctest::Approx(0.36).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.64).epsilon(1e-15));
  CHECK(p[2] == 0.0);
  CHECK(p[3] == 0.0);
}

TEST_CASE("cnot_initial is |10>") {
  const auto s = cnot_initial();
  CHECK(s[0] == Complex(0.0));
  CHECK(s[1] == Complex(0.0));
  CHECK(s[2] == Complex(1.0));
  CHECK(s[3] == Complex(0.0));
  CHECK(s.norm2() == 1.0);
}

TEST_CASE("parabolic vertex") {
  // p = 1 - (t - 2.3)^2 sampled at 2, 3, 4 -> exact vertex
  auto f = [](double t) { return 1.0 - (t - 2.3) * (t - 2.3); };
  const auto v = parabolic_vertex(2.0, f(2.0), 3.0, f(3.0), 4.0, f(4.0));
  CHECK(v.time == doctest::Approx(2.3).epsilon(1e-12));
  CHECK(v.peak == doctest::Approx(1.0).epsilon(1e-12));

  // Uneven spacing, backward ordering.
  const auto w = parabolic_vertex(-1.0, f(-1.0), -2.0, f(-2.0), -2.5, f(-2.5));
  CHECK(w.time >= -2.5);
  CHECK(w.time <= -1.0);

  // Refinement never leaves the bracketing samples.
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const double h = testgen::uniform(rng, 0.01, 1.0);
    const double t1 = testgen::uniform(rng, -10, 10);
    const double p1 = testgen::uniform(rng, 0.5, 1.0);
    const double p0 = p1 - testgen::uniform(rng, 0.0, 0.5);
    const double p2 = p1 - testgen::uniform(rng, 0.0, 0.5);
    const auto r = parabolic_vertex(t1 - h, p0, t1, p1, t1 + h, p2);
    REQUIRE(std::abs(r.time - t1) <= h);
    REQUIRE(r.peak >= p1);
  }
}

TEST_CASE("find_gate_time") {
  const IntegratorConfig cfg;

  SUBCASE("no drive, no transfer") {
    SystemParameters p = kPaperDefaults;
    p.omega = 0.0;
    CHECK_FALSE(find_gate_time(p, cfg, 500.0, 0.9).has_value());
  }
  SUBCASE("golden peak") {
    const auto g = find_gate_time(kPaperDefaults, cfg, 1000.0, golden::kProbeThreshold);
    REQUIRE(g.has_value());
    const double interval = cfg.dt * cfg.sample_stride;
    CHECK(std::abs(g->time - golden::kGateTime) <= interval);
    CHECK(std::abs(g->peak - golden::kGatePeak) <= 1e-6);
  }
  SUBCASE("horizon before the peak") {
    CHECK_FALSE(find_gate_time(kPaperDefaults, cfg, golden::kGateTime / 2,
                               golden::kProbeThreshold)
                    .has_value());
  }
  SUBCASE("unit-population condition is not met at the default threshold") {
    CHECK_FALSE(find_gate_time(kPaperDefaults, cfg, 1000.0, 0.99).has_value());
  }
  SUBCASE("argument checks") {
    CHECK_THROWS_AS(find_gate_time(kPaperDefaults, cfg, 0.0, 0.9), UsageError);
    CHECK_THROWS_AS(find_gate_time(kPaperDefaults, cfg, 10.0, 0.0), UsageError);
    CHECK_THROWS_AS(find_gate_time(kPaperDefaults, cfg, 10.0, 1.5), UsageError);
  }
}

TEST_CASE("gate time is monotone in the threshold") {
  // One trajectory, many thresholds: the qualifying set only shrinks.
  SystemParameters p = kPaperDefaults;
  p.omega = 0.03;
  IntegratorConfig cfg;
  const auto traj = evolve(p, cnot_initial(), 0.0, 1500.0, cfg);
  double last_time = -1.0;
  for (double th = 0.05; th <= 1.0; th += 0.05) {
    const auto scan = scan_gate_peak(traj, th);
    if (!scan.gate) {
      last_time = INFINITY;
      continue;
    }
    REQUIRE(scan.gate->time >= last_time);
    last_time = scan.gate->time;
  }
}

TEST_CASE("cnot_probe") {
  const IntegratorConfig cfg;

  SUBCASE("paper constants") {
    const auto r = cnot_probe(kPaperDefaults, cfg, 1000.0, golden::kProbeThreshold);
    CHECK(std::abs(r.gate_time - golden::kGateTime) <= cfg.dt * cfg.sample_stride);
    CHECK(std::abs(r.peak_population_forward - golden::kGatePeak) <= 1e-6);
    CHECK(std::abs(r.peak_population_forward - r.peak_population_backward) <= 1e-6);
    CHECK(r.mirror_residual <= 1e-6);
    CHECK(r.max_norm_error <= 1e-8);
    CHECK(r.threshold == golden::kProbeThreshold);

    double sum_f = r.peak_population_forward, sum_b = r.peak_population_backward;
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(r.residual_populations_forward[k] >= 0.0);
      sum_f += r.residual_populations_forward[k];
      sum_b += r.residual_populations_backward[k];
    }
    CHECK(std::abs(sum_f - 1.0) <= 1e-8);
    CHECK(std::abs(sum_b - 1.0) <= 1e-8);
  }

  SUBCASE("undriven system reports the best peak") {
    SystemParameters p = kPaperDefaults;
    p.omega = 0.0;
    try {
      cnot_probe(p, cfg, 200.0, 0.99);
      FAIL("expected DetectionError");
    } catch (const DetectionError& e) {
      CHECK(e.best_peak() == 0.0);
    }
  }
}

TEST_CASE("mirror symmetry for random parameters") {
  std::mt19937_64 rng(99);
  IntegratorConfig cfg;
  for (int trial = 0; trial < 5; ++trial) {
    auto p = testgen::random_params(rng);
    p.omega = testgen::uniform(rng, 0.02, 0.05);
    try {
      const auto r = cnot_probe(p, cfg, 2000.0, 0.3);
      CHECK(r.mirror_residual <= 1e-6);
    } catch (const DetectionError&) {
      // far-detuned draws may never transfer; basis_sweep still covers them
    }
    const auto rows = basis_sweep(p, 300.0, cfg);
    for (const auto& row : rows) CHECK(row.mirror_residual <= 1e-6);
  }
}

TEST_CASE("basis_sweep") {
  const IntegratorConfig cfg;
  SUBCASE("undriven: every input stays put") {
    SystemParameters p = kPaperDefaults;
    p.omega = 0.0;
    const auto rows = basis_sweep(p, 100.0, cfg);
    for (const auto& row : rows) {
      for (std::size_t k = 0; k < 4; ++k) {
        const double expected = k == row.basis ? 1.0 : 0.0;
        CHECK(std::abs(row.forward[k] - expected) <= 1e-12);
        CHECK(std::abs(row.backward[k] - expected) <= 1e-12);
      }
    }
  }
  SUBCASE("paper constants at the gate time") {
    const auto rows = basis_sweep(kPaperDefaults, golden::kGateTime, cfg);
    CHECK(rows[2].forward[3] == doctest::Approx(golden::kGatePeak).epsilon(1e-6));
    CHECK(rows[2].backward[3] == doctest::Approx(golden::kGatePeak).epsilon(1e-6));
    for (const auto& row : rows) {
      double sum = 0.0;
      for (double v : row.forward) sum += v;
      CHECK(std::abs(sum - 1.0) <= 1e-8);
      CHECK(row.max_norm_error <= 1e-8);
    }
  }
  CHECK_THROWS_AS(basis_sweep(kPaperDefaults, 0.0, cfg), UsageError);
}
