#include <benchmark/benchmark.h>

#include "rsde/simulate.hpp"

namespace {

void BM_SimulateTwoSided(benchmark::State& state) {
  const auto model = rsde::make_model(rsde::PowerDrift{0.5}, 0.2, rsde::BarrierConfig::two_sided(0.0, 3.0),
                                      {0.0, 10.0}, 1.0);
  const rsde::SamplingPlan plan{static_cast<std::size_t>(state.range(0)), 0.01, 0.25};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto path = rsde::simulate_path(model, 2.0, plan, {rsde::Scheme::Lepingle, 10, seed++});
    benchmark::DoNotOptimize(path.x.back());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 10);
}
BENCHMARK(BM_SimulateTwoSided)->Arg(200)->Arg(10000);

void BM_SimulateProjection(benchmark::State& state) {
  const auto model = rsde::make_model(rsde::PowerDrift{1.0}, 0.2, rsde::BarrierConfig::one_sided_lower(0.0),
                                      {0.0, 10.0}, 1.0);
  const rsde::SamplingPlan plan{10000, 0.01, 0.25};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto path = rsde::simulate_path(model, 2.0, plan, {rsde::Scheme::Projection, 10, seed++});
    benchmark::DoNotOptimize(path.x.back());
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_SimulateProjection);

void BM_SimulateTwoFactor(benchmark::State& state) {
  const rsde::TwoFactorParams params;
  const rsde::SamplingPlan plan{5000, 0.01, 0.25};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto path = rsde::simulate_two_factor(params, plan, {rsde::Scheme::Lepingle, 10, seed++});
    benchmark::DoNotOptimize(path.y.x.back());
  }
}
BENCHMARK(BM_SimulateTwoFactor);

}  // namespace

BENCHMARK_MAIN();
