// Parallel kernels against the serial reference implementation.

#include <benchmark/benchmark.h>

#include "bwreg/partial_test.hpp"
#include "bwreg/reference.hpp"
#include "bwreg/simgen.hpp"

namespace {

using namespace bwreg;

Dataset make_data(Index n, Index d, Index p_y = 2, Index p_z = 2) {
  SimConfig c;
  c.example = 2;
  c.n = n;
  c.p_y = p_y;
  c.p_z = p_z;
  c.d = d;
  c.seed = 42;
  return simulate(c).data;
}

void BM_DifferentialFrame(benchmark::State& state) {
  const Dataset data = make_data(8, state.range(0));
  const TransportBase base(data.responses[0]);
  for (auto _ : state) benchmark::DoNotOptimize(base.frame_to(data.responses[1]).differential_matrix());
}
BENCHMARK(BM_DifferentialFrame)->Arg(2)->Arg(6)->Arg(10);

void BM_DifferentialSylvester(benchmark::State& state) {
  const Dataset data = make_data(8, state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::differential_matrix(data.responses[0], data.responses[1]));
}
BENCHMARK(BM_DifferentialSylvester)->Arg(2)->Arg(6)->Arg(10);

void BM_StatisticParallel(benchmark::State& state) {
  const Dataset data = make_data(state.range(0), 4);
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    const SplitDataset s = split(data);
    const FirstHalfFit fit = fit_first_half(s, {}, threads);
    benchmark::DoNotOptimize(test_statistic(s, fit, 0.05, threads));
  }
}
BENCHMARK(BM_StatisticParallel)->Args({40, 1})->Args({40, 4})->Args({80, 4})->Unit(benchmark::kMillisecond);

void BM_StatisticReference(benchmark::State& state) {
  const Dataset data = make_data(state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(reference::statistic(data));
}
BENCHMARK(BM_StatisticReference)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_KernelParallel(benchmark::State& state) {
  const Dataset data = make_data(state.range(0), 4, 1, 1);
  const int threads = static_cast<int>(state.range(1));
  const SplitDataset s = split(data);
  const FirstHalfFit fit = fit_first_half(s, {}, threads);
  for (auto _ : state) {
    const InfluenceModel model(s, fit, CovariateEmbedding::Augmented, threads);
    benchmark::DoNotOptimize(kernel_matrix(s, model, threads));
  }
}
BENCHMARK(BM_KernelParallel)->Args({24, 1})->Args({24, 4})->Args({60, 4})->Unit(benchmark::kMillisecond);

void BM_KernelReference(benchmark::State& state) {
  const Dataset data = make_data(state.range(0), 4, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::kernel(data));
}
BENCHMARK(BM_KernelReference)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_FullTest(benchmark::State& state) {
  const Dataset data = make_data(state.range(0), 6);
  TestOptions o;
  o.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(run_partial_test(data, o));
}
BENCHMARK(BM_FullTest)->Args({100, 1})->Args({100, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
