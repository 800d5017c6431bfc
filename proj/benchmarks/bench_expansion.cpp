#include <benchmark/benchmark.h>

#include "qfbsde/expansion.hpp"
#include "qfbsde/harness.hpp"

namespace {

void BM_TermTable(benchmark::State& state) {
  const auto params = qfbsde::validate(qfbsde::eg1_params());
  double x = 0.05;
  for (auto _ : state) {
    x = x < 0.08 ? x + 1e-6 : 0.05;
    benchmark::DoNotOptimize(qfbsde::term_table(qfbsde::MarketState{0.0, 5.0, x}, params));
  }
}
BENCHMARK(BM_TermTable);

void BM_CompareTableClosedForm(benchmark::State& state) {
  qfbsde::RunConfig cfg = qfbsde::table_config(qfbsde::TableId::eg1);
  cfg.skip_mc = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qfbsde::reproduce_table(qfbsde::TableId::eg1, cfg));
  }
}
BENCHMARK(BM_CompareTableClosedForm);

}  // namespace
