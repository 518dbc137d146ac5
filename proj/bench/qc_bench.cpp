// Parallel against serial grid kernels on an annulus.

#include <benchmark/benchmark.h>

#include <cmath>

#include "flatlab/qc.hpp"

using namespace flatlab::qc;

namespace {

// a radial stretch with a twist; K is about 1.3 everywhere
cplx twisted(cplx z) {
  const double r = std::abs(z);
  return std::polar(std::pow(r, 1.3), std::arg(z) + 0.2 * std::log(r));
}

const Domain kAnnulus = Domain::annulus(0.5, 1);

void BM_sample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample(kAnnulus, n, n, twisted));
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_sample_serial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_serial(kAnnulus, n, n, twisted));
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_dilatation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridMap m = sample(kAnnulus, n, n, twisted);
  for (auto _ : state) benchmark::DoNotOptimize(dilatation(m));
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_dilatation_serial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridMap m = sample(kAnnulus, n, n, twisted);
  for (auto _ : state) benchmark::DoNotOptimize(dilatation_serial(m));
  state.SetItemsProcessed(state.iterations() * n * n);
}

}  // namespace

BENCHMARK(BM_sample)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_sample_serial)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_dilatation)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_dilatation_serial)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
