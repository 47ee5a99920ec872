#include <benchmark/benchmark.h>

#include <cmath>

#include "ruelle/oracle.hpp"

using namespace ruelle;

static void ExtractPoles(benchmark::State& state) {
  CorrelationSeries s;
  const auto n = static_cast<int>(state.range(0));
  for (int i = 0; i < n; ++i) {
    const double t = 20.0 * i / (n - 1);
    s.t.push_back(t);
    s.values.emplace_back(std::sqrt(3.141592653589793 / (1.0 + std::exp(2.0 * t))));
  }
  for (auto _ : state) benchmark::DoNotOptimize(extract_poles(s, 3));
}
BENCHMARK(ExtractPoles)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
