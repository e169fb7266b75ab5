#include <benchmark/benchmark.h>

#include "rsde/estimate.hpp"
#include "rsde/stationary.hpp"

namespace {

const rsde::ModelConfig& table_model() {
  static const auto model = rsde::make_model(rsde::PowerDrift{0.5}, 0.2, rsde::BarrierConfig::two_sided(0.0, 3.0),
                                             {0.0, 10.0}, 1.0);
  return model;
}

const rsde::SamplePath& long_path() {
  static const auto path =
      rsde::simulate_path(table_model(), 2.0, {10000, 0.01, 0.25}, {rsde::Scheme::Lepingle, 10, 1});
  return path;
}

void BM_ClosedForm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rsde::nlse_closed_form_power(long_path(), 0.5));
}
BENCHMARK(BM_ClosedForm);

void BM_GoldenSection(benchmark::State& state) {
  const auto& model = table_model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsde::nlse_optimize(long_path(), model.drift, model.theta_domain).theta_hat);
  }
}
BENCHMARK(BM_GoldenSection);

void BM_GInformation(benchmark::State& state) {
  auto model = table_model();
  if (state.range(0) == 0) model.barriers = rsde::BarrierConfig::one_sided_lower(0.0);
  for (auto _ : state) benchmark::DoNotOptimize(rsde::g_information(model, 2.0));
}
BENCHMARK(BM_GInformation)->Arg(1)->Arg(0);

void BM_FitWithInference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rsde::fit(long_path(), table_model()).std_error);
}
BENCHMARK(BM_FitWithInference);

}  // namespace
