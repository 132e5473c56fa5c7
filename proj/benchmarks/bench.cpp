#include <benchmark/benchmark.h>

#include <vector>

#include "foldcast/nn.hpp"
#include "foldcast/preprocess.hpp"
#include "foldcast/rng.hpp"
#include "foldcast/systems.hpp"

using namespace foldcast;

static void BM_RhsNld(benchmark::State& state) {
  std::array<double, 2> s{1.2, -0.4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs_nld(s, 0.5, 1.0));
  }
}
BENCHMARK(BM_RhsNld);

static void BM_RhsVdp(benchmark::State& state) {
  std::array<double, 4> s{1.2, -0.4, 0.3, 0.1};
  const VdpParams p;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs_vdp(s, 0.05, p));
  }
}
BENCHMARK(BM_RhsVdp);

static void BM_IntegrateNld(benchmark::State& state) {
  const auto model = SystemModel::nld(1.0, 0.5);
  StopRule stop;
  stop.max_time = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(model, {1.5, 1.5}, 0.01, stop));
  }
}
BENCHMARK(BM_IntegrateNld)->Arg(10)->Arg(100);

static void BM_IntegrateMob(benchmark::State& state) {
  const auto model = SystemModel::mob(2.0);
  StopRule stop;
  stop.max_time = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(model, {2.5, 1.5}, 0.01, stop));
  }
}
BENCHMARK(BM_IntegrateMob)->Arg(10)->Arg(100);

static void BM_ApplyPipeline(benchmark::State& state) {
  const auto model = SystemModel::nld(1.0, 0.5);
  const auto traj =
      integrate(model, {1.5, 1.5}, 0.01, StopRule::for_model(model));
  PipelineSpec spec;
  spec.kind = static_cast<PipelineKind>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_pipeline(traj, spec));
  }
}
BENCHMARK(BM_ApplyPipeline)->DenseRange(0, 4);

static void BM_ForwardPass(benchmark::State& state) {
  const auto params = nn::NetParams<float>::he_uniform(7);
  Rng rng(3);
  std::vector<float> channel(1024);
  for (auto& v : channel) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  nn::ForwardCache<float> cache;
  for (auto _ : state) {
    nn::forward(params, channel.data(), channel.size(), cache);
    benchmark::DoNotOptimize(cache.probabilities);
  }
}
BENCHMARK(BM_ForwardPass);

static void BM_LossAndGrads(benchmark::State& state) {
  const auto params = nn::NetParams<float>::he_uniform(7);
  Rng rng(3);
  std::vector<float> channel(1024);
  for (auto& v : channel) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  const std::vector<nn::BatchItem<float>> batch{
      {channel.data(), static_cast<int>(channel.size()), 1}};
  auto grads = nn::NetParams<float>::zeros();
  for (auto _ : state) {
    benchmark::DoNotOptimize(loss_and_grads(params, batch, grads));
  }
}
BENCHMARK(BM_LossAndGrads);

BENCHMARK_MAIN();
