#include <benchmark/benchmark.h>

#include "chronoq/analysis.hpp"
#include "chronoq/integrate.hpp"
#include "chronoq/model.hpp"
#include "chronoq/oracle.hpp"

namespace {

using namespace chronoq;

void BM_Hamiltonian(benchmark::State& state) {
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hamiltonian(kPaperDefaults, t));
    t += 0.01;
  }
}
BENCHMARK(BM_Hamiltonian);

void BM_FixedRk4(benchmark::State& state) {
  IntegratorConfig cfg;
  cfg.sample_stride = 1 << 30;
  const double t_end = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(kPaperDefaults, cnot_initial(), 0.0, t_end, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(t_end / cfg.dt));
}
BENCHMARK(BM_FixedRk4)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Adaptive45(benchmark::State& state) {
  IntegratorConfig cfg;
  cfg.method = Method::Adaptive45;
  cfg.sample_stride = 1 << 30;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(kPaperDefaults, cnot_initial(), 0.0, 1000.0, cfg));
  }
}
BENCHMARK(BM_Adaptive45)->Unit(benchmark::kMillisecond);

void BM_JacobiEigensystem(benchmark::State& state) {
  const auto m = hamiltonian(kPaperDefaults, 1.25);
  Matrix4 dense{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) dense[r][c] = m(r, c);
  }
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigensystem(dense));
}
BENCHMARK(BM_JacobiEigensystem);

void BM_SliceUnitary(benchmark::State& state) {
  const auto m = hamiltonian(kPaperDefaults, 1.25);
  for (auto _ : state) benchmark::DoNotOptimize(slice_unitary(m, 0.001));
}
BENCHMARK(BM_SliceUnitary);

void BM_Propagator(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_propagator(kPaperDefaults, cnot_initial(), 0.0, 10.0, {0.001}));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Propagator)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
