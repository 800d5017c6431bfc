#include <benchmark/benchmark.h>

#include "qfbsde/colehopf.hpp"
#include "qfbsde/harness.hpp"

namespace {

void BM_MilsteinStep(benchmark::State& state) {
  const qfbsde::VarianceDynamics dyn{0.15, 0.0795, 0.05};
  double x = 0.0625;
  double xi = 0.3;
  for (auto _ : state) {
    xi = -xi;
    x = qfbsde::milstein_step(x, xi, 0.005, dyn);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_MilsteinStep);

// Pair-steps per second of the value estimator: one pair over T = 1 is 200 steps.
void BM_McValue(benchmark::State& state) {
  const auto params = qfbsde::validate(qfbsde::eg1_params());
  qfbsde::McConfig cfg;
  cfg.n_pairs = static_cast<std::size_t>(state.range(0));
  cfg.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qfbsde::mc_value(params, 1.0, 0.0625, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 200);
}
BENCHMARK(BM_McValue)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_McZCommonRandomNumbers(benchmark::State& state) {
  const auto params = qfbsde::validate(qfbsde::eg1_params());
  qfbsde::McConfig cfg;
  cfg.n_pairs = static_cast<std::size_t>(state.range(0));
  cfg.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qfbsde::mc_z(params, 1.0, 0.0625, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 200);
}
BENCHMARK(BM_McZCommonRandomNumbers)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
