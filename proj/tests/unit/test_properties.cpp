#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "families.hpp"
#include "qbound/bounds.hpp"
#include "qbound/metrics.hpp"

using namespace qbound;
using testing_support::PerturbationParams;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<QubitState> random_states(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<QubitState> out;
  while (out.size() < n) {
    const double r = 0.05 + 0.9 * uniform01(rng);
    const double theta = 0.2 + (kPi - 0.4) * uniform01(rng);
    const double phi = 2 * kPi * uniform01(rng);
    if (std::abs(std::cos(phi)) < 0.1) continue;
    out.emplace_back(r, theta, phi);
  }
  return out;
}

}  // namespace

TEST_CASE("boundary-vanishing perturbations are valid, unbiased POVMs") {
  for (const PerturbationParams& p : testing_support::seeded_perturbations()) {
    for (const QubitState& s : random_states(4, 11)) {
      const EstimationContext ctx(s);
      const PovmFamily fam = testing_support::perturbed_family(p, ctx);
      const ValidationReport rep = validate_povm(fam, ctx);
      INFO("sigma " << p.sigma << " alpha " << p.alpha << " coupling " << p.coupling);
      CHECK(rep.ok());
      CHECK(rep.sign_conditions);
      const Window w = fam.window(ctx.construct_phi);
      CHECK(std::abs(fam.elements(w.hi, ctx.construct_phi).x11) <= 1e-13);
      CHECK(std::abs(fam.elements(w.lo, ctx.construct_phi).x11) <= 1e-13);
    }
  }
}

TEST_CASE("identity closes without a boundary term when the family vanishes at the edges") {
  for (const PerturbationParams& p : testing_support::seeded_perturbations()) {
    for (const QubitState& s : random_states(4, 12)) {
      const EstimationContext ctx(s);
      const AuditReport a = audit_derivation(BoundProblem{ctx, testing_support::perturbed_family(p, ctx)});
      INFO("sigma " << p.sigma << " alpha " << p.alpha << " coupling " << p.coupling);
      CHECK(std::abs(a.boundary_term) <= 1e-13);
      CHECK(std::abs(a.residual_eq72) <= 1e-9);
      CHECK(a.schwarz_slack >= -1e-10);
      CHECK(a.imag_residual <= 1e-10);
      CHECK(std::abs(a.zgz_residual) <= 1e-9);
    }
  }
}

TEST_CASE("C never exceeds C_max when the sign conditions hold") {
  for (const PerturbationParams& p : testing_support::seeded_perturbations()) {
    for (const QubitState& s : random_states(4, 13)) {
      const EstimationContext ctx(s);
      const CmaxBreakdown cm = bound_Cmax(ctx, testing_support::perturbed_family(p, ctx));
      if (!cm.upper_bound_valid()) continue;
      CHECK(cm.C <= cm.C_max + 1e-10);
    }
  }
}

TEST_CASE("Schwarz chain holds for the sharp family at random states and directions") {
  std::mt19937_64 rng(99);
  for (const QubitState& s : random_states(20, 14)) {
    const EstimationContext ctx(s, 0.3 * (uniform01(rng) - 0.5));
    BoundProblem prob{ctx, gaussian_sharp_family(1.0 + 3.0 * uniform01(rng), ctx)};
    prob.Z = {uniform01(rng) - 0.5, uniform01(rng) - 0.5, uniform01(rng) - 0.5};
    const AuditReport a = audit_derivation(prob);
    CHECK(a.schwarz_slack >= -1e-10);
    CHECK(a.imag_residual <= 1e-10);
    CHECK(std::abs(a.zgz_residual) <= 1e-9);
  }
}

TEST_CASE("metric hierarchy at random states") {
  for (const QubitState& s : random_states(30, 15)) {
    const EstimationContext ctx(s);
    const double f = measurement_fisher(ctx, gaussian_sharp_family(3.0, ctx));
    const double gs = sld_metric(s)[2][2];
    const double gr = rld_metric(s)[2][2];
    CHECK(f <= gs + 1e-9);
    CHECK(gs <= gr + 1e-9);
  }
}

TEST_CASE("estimator is unbiased for every validated family") {
  for (const PerturbationParams& p : testing_support::seeded_perturbations()) {
    for (const QubitState& s : random_states(3, 16)) {
      for (double eps : {-0.2, 0.0, 0.35}) {
        const EstimationContext ctx(s, eps);
        const EstimatorMoments m = estimator_moments(ctx, testing_support::perturbed_family(p, ctx));
        CHECK(std::abs(m.mean - (s.phi() + eps)) <= 1e-8);
      }
    }
  }
}
