#include <benchmark/benchmark.h>

#include <hypdim/catalog.hpp>
#include <hypdim/cocycle.hpp>

using namespace hypdim;

static void BM_CocycleValue(benchmark::State& state) {
  const auto e = catalog_system("cat_map");
  const Point x = e.info.sample(1, 1).front();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cocycle_value(e.system, e.frame, x, n, Bundle::unstable).log_op_norm);
}
BENCHMARK(BM_CocycleValue)->RangeMultiplier(4)->Range(16, 1024);

static void BM_CocyclePrefix(benchmark::State& state) {
  const auto e = catalog_system("jordan_endomorphism");
  Point x(2);
  x << 0.3, 0.7;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cocycle_prefix(e.system, e.frame, x, n, Bundle::unstable).size());
}
BENCHMARK(BM_CocyclePrefix)->RangeMultiplier(4)->Range(16, 1024);

static void BM_Lyapunov(benchmark::State& state) {
  const auto e = catalog_system("diag_endomorphism");
  Point x(2);
  x << 0.31, 0.27;
  for (auto _ : state)
    benchmark::DoNotOptimize(lyapunov_exponents(e.system, e.frame, x, 2000, Bundle::unstable).exponents);
}
BENCHMARK(BM_Lyapunov);
