#include <benchmark/benchmark.h>

#include "volterra/inverse.hpp"
#include "volterra/kernel.hpp"

using namespace volterra;

// Cost per output sample grows with the order-3 block, |x3| = M(M+1)(M+2)/6.
static void BM_ApplyKernel(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const VolterraKernel k = random_plant(m, 1).kernel;
  const Signal x(uniform_noise(4096, 1.0, 2), 512.0);
  for (auto _ : state) benchmark::DoNotOptimize(apply_kernel(k, x));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(x.size()));
  state.counters["coefficients"] = static_cast<double>(m + order2_size(m) + order3_size(m));
}
BENCHMARK(BM_ApplyKernel)->RangeMultiplier(2)->Range(1, 32);

static void BM_BuildExpansion(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const std::vector<double> w = uniform_noise(m, 1.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(build_expansion(w));
}
BENCHMARK(BM_BuildExpansion)->RangeMultiplier(2)->Range(1, 64);
