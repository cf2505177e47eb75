#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "qbound/phasespace.hpp"
#include "qbound/quadrature.hpp"

namespace {

using namespace qbound;

void BM_Integrate1d(benchmark::State& state) {
  QuadSpec spec;
  spec.panels = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(
        [](double u) { return std::exp(-u * u / 18.0); }, -std::numbers::pi, std::numbers::pi,
        spec));
  }
  state.SetItemsProcessed(state.iterations() * spec.panels * spec.order);
}
BENCHMARK(BM_Integrate1d)->Arg(16)->Arg(64)->Arg(256);

void BM_SphereHusimiMass(benchmark::State& state) {
  const QubitState s(0.7, 1.0, 2.0);
  const QuadSpec spec = default_sphere_spec();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sphere_integrate(husimi(s), spec));
  }
}
BENCHMARK(BM_SphereHusimiMass);

void BM_InverseWeyl(benchmark::State& state) {
  const HermitianOp2 rho = density_matrix(QubitState(0.7, 1.0, 2.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(inverse_weyl(weyl_map(rho, -1.0), -1.0));
  }
}
BENCHMARK(BM_InverseWeyl);

}  // namespace
