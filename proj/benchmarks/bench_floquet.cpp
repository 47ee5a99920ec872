#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "ruelle/floquet.hpp"

using namespace ruelle;

namespace {

PeriodicCoefficient wobbling() {
  PeriodicCoefficient c;
  c.period = 1.0;
  c.size = 2;
  c.evaluate = [](double t) {
    const double w = std::cos(2.0 * std::numbers::pi * t);
    Eigen::MatrixXd a(2, 2);
    a << 0.5 + w, 1.0, 0.3, 0.5 - w;
    return a;
  };
  return c;
}

}  // namespace

static void Monodromy(benchmark::State& state) {
  const PeriodicCoefficient c = wobbling();
  const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(monodromy(c, tol));
}
BENCHMARK(Monodromy)->DenseRange(6, 12, 2)->Unit(benchmark::kMicrosecond);

static void Decompose(benchmark::State& state) {
  const Eigen::MatrixXd m = monodromy(wobbling());
  for (auto _ : state) benchmark::DoNotOptimize(floquet_decompose(m, 1.0));
}
BENCHMARK(Decompose);

static void SampledMonodromy(benchmark::State& state) {
  const PeriodicCoefficient exact = wobbling();
  std::vector<double> theta;
  std::vector<Eigen::MatrixXd> samples;
  const auto n = static_cast<int>(state.range(0));
  for (int i = 0; i < n; ++i) {
    theta.push_back(static_cast<double>(i) / n);
    samples.push_back(exact.evaluate(theta.back()));
  }
  const PeriodicCoefficient c = PeriodicCoefficient::sampled(theta, samples, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(monodromy(c));
}
BENCHMARK(SampledMonodromy)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
