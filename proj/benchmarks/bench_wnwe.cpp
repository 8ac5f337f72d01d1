#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wnwe/diagnostics.hpp"
#include "wnwe/equations.hpp"
#include "wnwe/spectral.hpp"
#include "wnwe/stepper.hpp"

using namespace wnwe;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexVector noise(std::size_t n) {
  std::mt19937_64 rng(n);
  std::normal_distribution<double> normal;
  ComplexVector v(n);
  for (auto& x : v) x = Complex(normal(rng), normal(rng));
  return v;
}

void BM_FftRoundTrip(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SpectralGrid g = make_grid(n, 1.0);
  const ComplexVector u = noise(n);
  for (auto _ : state) {
    ComplexVector back = dft_inverse(dft_forward(u, g), g);
    benchmark::DoNotOptimize(back.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FftRoundTrip)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oNLogN);

void BM_DirectDft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ComplexVector u = noise(n);
  for (auto _ : state) {
    ComplexVector out = dft_direct(u, -1);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_DirectDft)->Arg(96)->Arg(384);

void BM_KdvStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SpectralGrid g = make_grid(n, 20.0);
  const Field u0 = initial_condition("kdv_gaussian", {{"period", 20.0}}).sample(g);
  SolverSession s(kdv_system(0.05, 1.0), g, StepConfig::fixed(0.01), u0);
  for (auto _ : state) s.step();
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_KdvStep)->Arg(256)->Arg(512)->Arg(2048);

void BM_NlsStepConverged(benchmark::State& state) {
  const SpectralGrid g = make_grid(1024, 2 * kPi);
  const Field u0 = initial_condition("nls_sech", {{"b", 3.0}, {"nu", 2.0}}).sample(g);
  SolverSession s(nls_system(1.0, 2.0), g, StepConfig::converged(1e-3, 1e-12), u0);
  std::size_t iterations = 0;
  for (auto _ : state) iterations += s.step().iterations;
  state.counters["fixed_point_iters"] =
      benchmark::Counter(static_cast<double>(iterations), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_NlsStepConverged);

void BM_SgeStep(benchmark::State& state) {
  const SpectralGrid g = make_grid(256, 2 * kPi);
  const Field u0 = initial_condition("sge_sine", {{"amplitude", 1.0}, {"wavenumber", 1.0}}).sample(g);
  SolverSession s(sge_system(), g, StepConfig::fixed(0.01), u0);
  for (auto _ : state) s.step();
}
BENCHMARK(BM_SgeStep);

void BM_OperatorNormB(benchmark::State& state) {
  const SpectralGrid g = make_grid(4096, 20.0);
  const EquationSystem sys = kdv_system(0.05, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(operator_norm_B(sys, g, 1e-3));
}
BENCHMARK(BM_OperatorNormB);

}  // namespace

BENCHMARK_MAIN();
