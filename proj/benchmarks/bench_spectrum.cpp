#include <benchmark/benchmark.h>

#include "ruelle/spectrum.hpp"

using namespace ruelle;

namespace {

EigenDatum entry(std::int64_t num, std::int64_t den) {
  EigenDatum d;
  d.chi = Real::exact(Rational(num, den));
  d.omega = Real::exact(Rational(0));
  d.stable = num < 0;
  return d;
}

FlowModel saddle() {
  FlowModel m;
  m.dim = 2;
  m.mode = ArithmeticMode::exact;
  m.fixed_points.push_back({ElementKind::fixed_point, "saddle", Real(), {entry(-1, 1), entry(2, 1)}, Rational(0)});
  return m;
}

FlowModel orbit_model() {
  FlowModel m;
  m.dim = 3;
  m.mode = ArithmeticMode::exact;
  CriticalElement o{ElementKind::closed_orbit, "cycle", Real::exact(PiLinear::pi_multiple(2)), {entry(-1, 2), entry(3, 2)},
                    Rational(0)};
  m.orbits.push_back(o);
  return m;
}

}  // namespace

static void Resonances(benchmark::State& state) {
  const FlowModel m = saddle();
  const double t = static_cast<double>(state.range(0));
  std::size_t points = 0;
  for (auto _ : state) {
    const auto r = resonances(m, 1, Box{t, t}, Labels::none);
    points = r.size();
    benchmark::DoNotOptimize(r.data());
  }
  state.counters["points"] = static_cast<double>(points);
}
BENCHMARK(Resonances)->RangeMultiplier(2)->Range(8, 128)->Unit(benchmark::kMillisecond);

static void ResonancesOrbit(benchmark::State& state) {
  const FlowModel m = orbit_model();
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) {
    const auto r = resonances(m, 1, Box{t, t}, Labels::first);
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(ResonancesOrbit)->RangeMultiplier(2)->Range(4, 32)->Unit(benchmark::kMillisecond);

static void WeylCount(benchmark::State& state) {
  const FlowModel m = saddle();
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(weyl_count(m, 0, t));
}
BENCHMARK(WeylCount)->RangeMultiplier(4)->Range(50, 3200)->Unit(benchmark::kMillisecond);

static void CountImaginary(benchmark::State& state) {
  FlowModel m = orbit_model();
  m.orbits[0].eigenvalues = {entry(-1, 1)};
  m.dim = 2;
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_imaginary(m, 1, t));
}
BENCHMARK(CountImaginary)->RangeMultiplier(10)->Range(10, 10000);

BENCHMARK_MAIN();
