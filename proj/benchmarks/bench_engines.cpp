#include <benchmark/benchmark.h>

#include <cmath>

#include "spinlhv/chsh.hpp"
#include "spinlhv/classical.hpp"
#include "spinlhv/quantum.hpp"

using namespace spinlhv;

namespace {

void BM_CqNumeric(benchmark::State& state) {
  const auto w = spinspace::CoherentLabel::finite(std::sqrt(0.5));
  double tau = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(quantum::cq_numeric(w, w, tau));
    tau += 1e-3;
  }
}
BENCHMARK(BM_CqNumeric);

void BM_Summarize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double tau = static_cast<double>(state.range(1));
  const classical::DistributionSpec spec(1.0, {0.3, 0.2}, {1.0, -0.4});
  const classical::QuadratureSpec quad{n, n, std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(classical::summarize(spec, tau, quad));
}
BENCHMARK(BM_Summarize)->Args({32, 3})->Args({64, 3})->Args({64, 500})->Unit(benchmark::kMillisecond);

void BM_SummarizeGated(benchmark::State& state) {
  const classical::DistributionSpec spec(1.0, {0.0, 0.0}, {0.0, 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(classical::summarize(spec, 10.0, {}));
}
BENCHMARK(BM_SummarizeGated)->Unit(benchmark::kMillisecond);

Mat3 sample_matrix() {
  Mat3 t;
  t << 0.3, -0.7, 0.1, 0.5, 0.2, -0.9, -0.4, 0.6, 0.8;
  return t;
}

void BM_BmaxClosedForm(benchmark::State& state) {
  const Mat3 t = sample_matrix();
  for (auto _ : state) benchmark::DoNotOptimize(chsh::bmax_closed_form(t));
}
BENCHMARK(BM_BmaxClosedForm);

void BM_BmaxOptimize(benchmark::State& state) {
  const Mat3 t = sample_matrix();
  const chsh::OptimizerOptions options{.alice = state.range(0) ? chsh::AliceAxis::free : chsh::AliceAxis::fixed_z};
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(chsh::bmax_optimize(t, 1, options));
    } catch (const chsh::OptimizerLandscapeError&) {
    }
  }
}
BENCHMARK(BM_BmaxOptimize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
