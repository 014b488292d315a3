#include <benchmark/benchmark.h>

#include <hypdim/bowen.hpp>
#include <hypdim/pressure.hpp>

using namespace hypdim;

static void BM_TransferPressure(benchmark::State& state) {
  const auto e = catalog_system("perturbed_doubling");
  const int depth = static_cast<int>(state.range(0));
  auto phi = [&](const Word& w) {
    return -std::log(e.system.jacobian(e.coding->anchor(w))(0, 0));
  };
  for (auto _ : state) benchmark::DoNotOptimize(pressure_transfer(*e.coding, phi, depth).estimate.value);
}
BENCHMARK(BM_TransferPressure)->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);

static void BM_SeparatedSet(benchmark::State& state) {
  const auto e = catalog_system("perturbed_doubling");
  const int n = static_cast<int>(state.range(0));
  double spacing = 0.0;
  const auto seeds = separated_seeds(e, n, 0.05, &spacing);
  for (auto _ : state) benchmark::DoNotOptimize(max_separated_set(e.system, n, 0.05, seeds, spacing).points.size());
  state.counters["seeds"] = static_cast<double>(seeds.size());
}
BENCHMARK(BM_SeparatedSet)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_SandwichCatMap(benchmark::State& state) {
  const auto e = catalog_system("cat_map");
  for (auto _ : state)
    benchmark::DoNotOptimize(
        sandwich_sequence(e, Bundle::unstable, static_cast<int>(state.range(0)), SandwichMethod::transfer_operator));
}
BENCHMARK(BM_SandwichCatMap)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
