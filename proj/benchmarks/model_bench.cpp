#include <benchmark/benchmark.h>

#include <vector>

#include "setpredict/loss.hpp"
#include "setpredict/network.hpp"
#include "setpredict/rng.hpp"

using namespace setpredict;

namespace {

Architecture bench_arch(int width) {
  Architecture arch;
  arch.input_dim = 20;
  arch.hidden_widths = {width, width};
  arch.num_labels = 10;
  arch.dropout_rate = 0.5;
  return arch;
}

}  // namespace

static void BM_ForwardEval(benchmark::State& state) {
  const Architecture arch = bench_arch(static_cast<int>(state.range(0)));
  const ModelParams params = init(arch, 3);
  Rng rng(4);
  std::vector<double> x(static_cast<std::size_t>(arch.input_dim));
  for (double& v : x) v = rng.normal();
  Rng unused(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(params, x, ForwardMode::kEval, unused));
  }
}
BENCHMARK(BM_ForwardEval)->Arg(64)->Arg(256);

static void BM_ForwardBackward(benchmark::State& state) {
  const Architecture arch = bench_arch(static_cast<int>(state.range(0)));
  const ModelParams params = init(arch, 3);
  Rng rng(4);
  std::vector<double> x(static_cast<std::size_t>(arch.input_dim));
  for (double& v : x) v = rng.normal();
  const LabelSet labels({0, 3, 7});
  const CardinalityStats stats =
      CardinalityStats::from_counts(std::vector<std::uint64_t>(11, 10));
  TrainConfig cfg;
  Rng dropout_rng(5);
  for (auto _ : state) {
    ActivationCache cache;
    const DualOutput out = forward(params, x, ForwardMode::kTrain, dropout_rng, &cache);
    const DualOutput grad_dual = sample_loss_grad(out, labels, stats, cfg);
    benchmark::DoNotOptimize(backward(params, cache, grad_dual));
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
