#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "qbound/measurement.hpp"

namespace {

using namespace qbound;

OutcomeDensity figure_density() {
  const EstimationContext ctx(QubitState(0.5, std::numbers::pi / 2, 3 * std::numbers::pi / 4));
  return outcome_distribution(ctx, gaussian_sharp_family(3.0, ctx));
}

void BM_BuildSampler(benchmark::State& state) {
  const OutcomeDensity q = figure_density();
  const auto nodes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(InverseCdfSampler(q, nodes));
}
BENCHMARK(BM_BuildSampler)->Arg(4096)->Arg(65536);

void BM_Draw(benchmark::State& state) {
  const InverseCdfSampler sampler(figure_density());
  std::mt19937_64 rng(42);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Draw);

void BM_SampleOutcomes(benchmark::State& state) {
  const OutcomeDensity q = figure_density();
  for (auto _ : state) benchmark::DoNotOptimize(sample_outcomes(q, 100000, 42));
}
BENCHMARK(BM_SampleOutcomes)->Unit(benchmark::kMillisecond);

}  // namespace
