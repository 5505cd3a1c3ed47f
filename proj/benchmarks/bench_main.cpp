#include <benchmark/benchmark.h>

#include "voter/montecarlo.hpp"
#include "voter/observables.hpp"
#include "voter/propagator.hpp"
#include "voter/spectral.hpp"

namespace {

std::vector<voter::Rational> delta(int n, int j) {
  std::vector<voter::Rational> a(static_cast<std::size_t>(n) + 1, voter::Rational(0));
  a[j] = 1;
  return a;
}

void BM_BuildDecomposition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(voter::build_decomposition(n));
}
BENCHMARK(BM_BuildDecomposition)->Arg(16)->Arg(64)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ToCoordinates(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto d = voter::build_decomposition(n);
  const auto a0 = delta(n, n / 2);
  for (auto _ : state) benchmark::DoNotOptimize(voter::to_coordinates(d, a0));
}
BENCHMARK(BM_ToCoordinates)->Arg(64)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_PropagateFloat(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto d = voter::build_decomposition(n, voter::NumericMode::floating);
  const auto coords = voter::to_coordinates(d, delta(n, n / 2));
  for (auto _ : state) benchmark::DoNotOptimize(voter::propagate_spectral_float(d, coords, state.range(1)));
}
BENCHMARK(BM_PropagateFloat)->Args({64, 1000})->Args({100, 10000})->Unit(benchmark::kMillisecond);

void BM_MomentExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto d = voter::build_decomposition(n);
  const auto coords = voter::to_coordinates(d, delta(n, n / 2));
  for (auto _ : state) benchmark::DoNotOptimize(voter::moment_exact(d, coords, 4));
}
BENCHMARK(BM_MomentExact)->Arg(64)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_RunToConsensus(benchmark::State& state) {
  voter::SimulationConfig cfg;
  cfg.topology = voter::CompleteSpec{static_cast<int>(state.range(0))};
  cfg.init = voter::FractionInit{0.5};
  int replica = 0;
  for (auto _ : state) benchmark::DoNotOptimize(voter::run_to_consensus(cfg, replica++));
}
BENCHMARK(BM_RunToConsensus)->Arg(100)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
