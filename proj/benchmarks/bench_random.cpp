#include <benchmark/benchmark.h>

#include <cstdint>

#include "qfbsde/random.hpp"

namespace {

void BM_PhiloxBlock(benchmark::State& state) {
  qfbsde::Philox4x32::Counter ctr{0, 0, 0, 0};
  const qfbsde::Philox4x32::Key key{0x1234u, 0x5678u};
  for (auto _ : state) {
    ++ctr[0];
    benchmark::DoNotOptimize(qfbsde::Philox4x32::block(ctr, key));
  }
}
BENCHMARK(BM_PhiloxBlock);

void BM_NormalQuantile(benchmark::State& state) {
  double u = 0.0001;
  for (auto _ : state) {
    u += 0.61803398875;
    if (u >= 1.0) u -= 0.9999;
    benchmark::DoNotOptimize(qfbsde::normal_quantile(u));
  }
}
BENCHMARK(BM_NormalQuantile);

void BM_NormalStreamNext(benchmark::State& state) {
  qfbsde::NormalStream normals(42, 7);
  for (auto _ : state) benchmark::DoNotOptimize(normals.next());
}
BENCHMARK(BM_NormalStreamNext);

}  // namespace
