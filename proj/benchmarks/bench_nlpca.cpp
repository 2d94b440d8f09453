#include <benchmark/benchmark.h>

#include "nlpca/nlpca.hpp"

using namespace nlpca;

static void BM_UniformStiefel(benchmark::State& state) {
  const auto p = state.range(0);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_uniform_stiefel(p, 2, rng));
}
BENCHMARK(BM_UniformStiefel)->Arg(3)->Arg(196);

static void BM_VmfRejection(benchmark::State& state) {
  const double kappa = static_cast<double>(state.range(0));
  const VmfParam c(kappa * Matrix::Identity(3, 2));
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(vmf_sample_rejection(c, rng, 100000));
}
BENCHMARK(BM_VmfRejection)->Arg(0)->Arg(2)->Arg(8);

static void BM_VmfColumnGibbs(benchmark::State& state) {
  const auto p = state.range(0);
  const VmfParam c(50.0 * Matrix::Identity(p, 2));
  StiefelPoint x = vmf_mode(c);
  Rng rng(3);
  for (auto _ : state) x = vmf_sample_column_gibbs(c, x, 10, rng);
}
BENCHMARK(BM_VmfColumnGibbs)->Arg(3)->Arg(196);

static void BM_SphereSweep(benchmark::State& state) {
  Rng rng(4);
  const SphereSample sample = generate_sphere(state.range(0), 0.05, rng);
  const HyperParams hp = make_hyperparams(sample.data, 2);
  ModelState model = init_state(sample.data, hp);
  for (auto _ : state) benchmark::DoNotOptimize(sweep(model, sample.data, hp, rng));
}
BENCHMARK(BM_SphereSweep)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
