#include <benchmark/benchmark.h>

#include <numbers>

#include "qbound/bounds.hpp"

namespace {

using namespace qbound;

const QubitState kState(0.5, std::numbers::pi / 2, 3 * std::numbers::pi / 4);

void BM_BoundCmax(benchmark::State& state) {
  const EstimationContext ctx(kState);
  const PovmFamily fam = gaussian_sharp_family(3.0, ctx);
  for (auto _ : state) benchmark::DoNotOptimize(bound_Cmax(ctx, fam));
}
BENCHMARK(BM_BoundCmax);

void BM_Audit(benchmark::State& state) {
  const EstimationContext ctx(kState);
  const BoundProblem prob{ctx, gaussian_sharp_family(3.0, ctx)};
  for (auto _ : state) benchmark::DoNotOptimize(audit_derivation(prob));
}
BENCHMARK(BM_Audit);

void BM_Sweep(benchmark::State& state) {
  SweepOptions opt;
  opt.r_values = SweepOptions::grid(0.1, 0.9, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bounds_sweep(opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sweep)->Arg(9)->Arg(81)->Unit(benchmark::kMillisecond);

}  // namespace
