#include <benchmark/benchmark.h>

#include "ruelle/polytope.hpp"

using namespace ruelle;

namespace {

CriticalElement point(const std::vector<std::int64_t>& chis) {
  CriticalElement e;
  e.name = "p";
  for (std::int64_t c : chis) {
    EigenDatum d;
    d.chi = Real::exact(Rational(c));
    d.omega = Real::exact(Rational(0));
    d.stable = c < 0;
    e.eigenvalues.push_back(d);
  }
  return e;
}

}  // namespace

static void ExactVolume3d(benchmark::State& state) {
  const WeylPolytope p = polytope(point({-1, 2, 3}));
  for (auto _ : state) benchmark::DoNotOptimize(polytope_volume(p, VolumeMethod::exact));
}
BENCHMARK(ExactVolume3d)->Unit(benchmark::kMicrosecond);

static void MonteCarloVolume4d(benchmark::State& state) {
  const WeylPolytope p = polytope(point({-1, -2, 3, 1}));
  const auto samples = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(polytope_volume(p, VolumeMethod::montecarlo, samples));
}
BENCHMARK(MonteCarloVolume4d)->RangeMultiplier(10)->Range(10000, 1000000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
