// Acceptance gate: one line per criterion, exit status non-zero if any fails.
// Tolerances and runtime budgets are fixed here and must not be tuned.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "chronoq/analysis.hpp"
#include "chronoq/integrate.hpp"
#include "chronoq/model.hpp"
#include "chronoq/oracle.hpp"
#include "chronoq_cli/commands.hpp"
#include "generators.hpp"
#include "golden.hpp"

using namespace chronoq;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

IntegratorConfig rk4(int stride) {
  IntegratorConfig c;
  c.method = Method::FixedRk4;
  c.dt = 0.01;
  c.sample_stride = stride;
  return c;
}

std::vector<SystemParameters> random_sets(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<SystemParameters> out;
  for (int i = 0; i < count; ++i) out.push_back(testgen::random_params(rng));
  return out;
}

Outcome norm_conservation() {
  double worst = 0.0;
  for (double t_end : {5000.0, -5000.0}) {
    const auto traj = evolve(kPaperDefaults, cnot_initial(), 0.0, t_end, rk4(1));
    worst = std::max(worst, max_norm_error(traj));
  }
  return {worst <= 1e-8, fmt("max |norm^2 - 1| = %.3e (limit 1e-8)", worst)};
}

Outcome unitary_round_trip() {
  double worst = roundtrip_residual(kPaperDefaults, cnot_initial(), 2000.0, rk4(1000));
  double worst_rate = 0.0;  // largest |E|*dt among sets over the limit
  std::mt19937_64 rng(2002);
  for (const auto& p : random_sets(1002, 20)) {
    const double r = roundtrip_residual(p, testgen::random_state(rng), 2000.0, rk4(1000));
    worst = std::max(worst, r);
    if (r > 1e-8) {
      double e = 0.0;
      for (double v : diagonal_energies(p)) e = std::max(e, std::abs(v));
      worst_rate = std::max(worst_rate, e * 0.01);
    }
  }
  std::string detail = fmt("max residual = %.3e over 21 parameter sets (limit 1e-8)", worst);
  if (worst_rate > 0.0) {
    detail += fmt("; failing sets reach |E|*dt = %.4f, RK4 per-step norm loss ~(|E|*dt)^6/72", worst_rate);
  }
  return {worst <= 1e-8, detail};
}

Outcome mirror_symmetry() {
  auto sets = random_sets(1003, 20);
  sets.insert(sets.begin(), kPaperDefaults);
  double worst = 0.0;
  for (const auto& p : sets) {
    for (std::size_t k = 0; k < 4; ++k) {
      const auto fwd = evolve(p, TwoQubitState::basis(k), 0.0, 2000.0, rk4(1));
      const auto bwd = evolve(p, TwoQubitState::basis(k), 0.0, -2000.0, rk4(1));
      worst = std::max(worst, mirror_residual(fwd, bwd));
    }
  }
  return {worst <= 1e-6,
          fmt("max | |C_k(-t)|^2 - |C_k(t)|^2 | = %.3e over 21 sets x 4 inputs (limit 1e-6)", worst)};
}

Outcome oracle_equivalence() {
  auto sets = random_sets(1004, 10);
  sets.insert(sets.begin(), kPaperDefaults);
  double worst = 0.0;
  for (const auto& p : sets) {
    const auto rk = evolve(p, cnot_initial(), 0.0, 2000.0, rk4(1 << 30)).back().state;
    const auto prop = evolve_propagator(p, cnot_initial(), 0.0, 2000.0, {0.001});
    worst = std::max(worst, max_amplitude_distance(rk, prop));
  }
  return {worst <= 1e-6, fmt("max amplitude distance at t=2000 = %.3e (limit 1e-6)", worst)};
}

Outcome convergence() {
  const std::vector<double> dts{0.1, 0.05, 0.025};
  const auto study = convergence_order(kPaperDefaults, cnot_initial(), 100.0, dts);
  const bool ok = study.order >= 3.7 && study.order <= 4.3;
  return {ok, fmt("RK4 order estimate = %.4f (window [3.7, 4.3])", study.order)};
}

struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("chronoq_accept_" + tag + "_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome golden_probe() {
  cli::RunConfig cfg;
  cfg.threshold = golden::kProbeThreshold;
  std::ostringstream out, err;
  const int code = cli::cmd_probe(cfg, out, err);
  if (code != cli::kExitOk) return {false, "probe exited with " + std::to_string(code)};

  const auto doc = nlohmann::json::parse(out.str());
  const double T = doc["gate_time"].get<double>();
  const double fwd = doc["peak_population_forward"].get<double>();
  const double bwd = doc["peak_population_backward"].get<double>();
  const double interval = cfg.integrator.dt * cfg.integrator.sample_stride;

  const bool t_ok = std::abs(T - golden::kGateTime) <= interval;
  const bool peak_ok = std::abs(fwd - golden::kGatePeak) <= 1e-6;
  const bool mirror_ok = std::abs(fwd - bwd) <= 1e-6;

  // The unit-peak claim counts as reproduced only at >= 0.99; otherwise the
  // manifest has to say so.
  const bool unit_reproduced = golden::kGatePeak >= cli::kUnitPeakThreshold;
  ScratchDir dir("golden");
  std::ostringstream fout, ferr;
  bool documented = cli::cmd_figures(cfg, dir.path, fout, ferr) == cli::kExitOk;
  if (documented) {
    const auto manifest = nlohmann::json::parse(slurp(dir.path / "manifest.json"));
    documented = manifest["gate"]["unit_peak_reproduced"].get<bool>() == unit_reproduced &&
                 manifest.contains("unit_population_transfer");
  }

  std::ostringstream d;
  d.precision(10);
  d << "T=" << T << " (golden " << golden::kGateTime << ", tol " << interval << "), peak=" << fwd
    << " (golden " << golden::kGatePeak << "), |fwd-bwd|=" << std::abs(fwd - bwd)
    << ", unit peak " << (unit_reproduced ? "reproduced" : "NOT reproduced (documented in manifest)");
  return {t_ok && peak_ok && mirror_ok && documented, d.str()};
}

Outcome hamiltonian_pinning() {
  const auto m = hamiltonian(kPaperDefaults, 0.0);
  const double diag[] = {-0.203, -0.197, 0.2, 0.2};
  double worst = 0.0;
  for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(m(k, k) - diag[k]));
  worst = std::max(worst, std::abs(m(0, 2) - Complex(0.0, -0.005)));
  worst = std::max(worst, std::abs(m(0, 3)));
  worst = std::max(worst, std::abs(m(1, 2)));
  return {worst <= 1e-15, fmt("max entry deviation = %.3e (limit 1e-15)", worst)};
}

Outcome cli_determinism() {
  cli::RunConfig cfg;
  cfg.threshold = golden::kProbeThreshold;
  ScratchDir a("a"), b("b");
  std::ostringstream out, err;
  if (cli::cmd_figures(cfg, a.path, out, err) != cli::kExitOk ||
      cli::cmd_figures(cfg, b.path, out, err) != cli::kExitOk) {
    return {false, "figures command failed: " + err.str()};
  }
  int identical = 0;
  for (const char* f : {"fig1_norm.csv", "fig2_p00.csv", "fig3_p01.csv", "fig4_p10.csv", "fig5_p11.csv"}) {
    const auto x = slurp(a.path / f);
    if (!x.empty() && x == slurp(b.path / f)) ++identical;
  }
  return {identical == 5, std::to_string(identical) + "/5 data files byte-identical"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "norm conservation", 10.0, norm_conservation},
      {2, "unitary round trip", 30.0, unitary_round_trip},
      {3, "mirror symmetry", 60.0, mirror_symmetry},
      {4, "oracle equivalence", 60.0, oracle_equivalence},
      {5, "convergence order", 5.0, convergence},
      {6, "golden gate probe", 30.0, golden_probe},
      {7, "hamiltonian pinning", 1.0, hamiltonian_pinning},
      {8, "CLI determinism", 10.0, cli_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("[%s] %d %-20s %s; runtime %.2fs (budget %.0fs)%s\n", pass ? "PASS" : "FAIL", c.id,
                c.name, o.detail.c_str(), secs, c.budget_seconds, in_time ? "" : " OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
