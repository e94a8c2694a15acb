#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "vflow/picard.hpp"
#include "vflow/quadrature.hpp"
#include "vflow/rk.hpp"
#include "vflow/verify.hpp"

using namespace vflow;

static void BM_KernelIntegrals(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = RadialGrid::graded(1.0, 1.5, n);
  const KernelQuadrature q(g);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sqrt(g.offset(i));
  for (auto _ : state) benchmark::DoNotOptimize(q.kernel_integrals(v));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KernelIntegrals)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oN);

static void BM_PicardSolve(benchmark::State& state) {
  const auto m = VorticityModel::classical();
  const auto g = RadialGrid::graded(1.0, 1.5, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(picard_solve(m, 1.0, 1.0, g));
}
BENCHMARK(BM_PicardSolve)->Arg(512)->Arg(2048)->Arg(8192);

static void BM_RkSolve(benchmark::State& state) {
  const auto m = VorticityModel::classical();
  const auto g = RadialGrid::graded(1.0, 1.5, 2048);
  StepControl ctrl;
  ctrl.rel_tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rk_solve(m, 1.0, 1.0, 1.5, ctrl, g));
}
BENCHMARK(BM_RkSolve)->Arg(6)->Arg(8)->Arg(10);

static void BM_VerifyUniqueness(benchmark::State& state) {
  const auto m = VorticityModel::classical();
  const auto g = RadialGrid::graded(1.0, 1.5, 2048);
  for (auto _ : state) benchmark::DoNotOptimize(verify_uniqueness(m, 1.0, 1.0, g));
}
BENCHMARK(BM_VerifyUniqueness)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
