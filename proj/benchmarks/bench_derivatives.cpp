#include <benchmark/benchmark.h>

#include "qbound/derivatives.hpp"
#include "qbound/metrics.hpp"

namespace {

using namespace qbound;

const QubitState kState(0.5, 1.2, 2.4);

void BM_LogDerivativesClosed(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(new_log_derivatives(kState, Evaluation::ClosedForm));
  }
}
BENCHMARK(BM_LogDerivativesClosed);

void BM_LogDerivativesQuadrature(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(new_log_derivatives(kState, Evaluation::Quadrature));
  }
}
BENCHMARK(BM_LogDerivativesQuadrature);

void BM_MetricReport(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(metric_report(kState));
}
BENCHMARK(BM_MetricReport);

void BM_HusimiMetricQuadrature(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(husimi_classical_metric(kState, HusimiMethod::Quadrature));
  }
}
BENCHMARK(BM_HusimiMetricQuadrature);

}  // namespace
