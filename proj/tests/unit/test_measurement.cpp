#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "families.hpp"
#include "oracles.hpp"
#include "qbound/error.hpp"
#include "qbound/measurement.hpp"
#include "qbound/selftest.hpp"

using namespace qbound;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

const QubitState kReferenceState(0.5, kPi / 2, 3 * kPi / 4);

double mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance_about(const std::vector<double>& xs, double centre) {
  double s = 0.0;
  for (double x : xs) s += (x - centre) * (x - centre);
  return s / static_cast<double>(xs.size());
}

}  // namespace

TEST_CASE("sharp family elements") {
  const EstimationContext ctx(kReferenceState);
  const PovmFamily fam = gaussian_sharp_family(3.0, ctx);
  const oracle::TruncatedGaussian tg{3.0};
  const double mu = ctx.construct_phi;
  const Window w = fam.window(mu);
  CHECK(w.lo == Approx(mu - kPi));
  CHECK(w.hi == Approx(mu + kPi));
  CHECK(w.centre() == mu);

  SUBCASE("edge value") {
    CHECK(std::abs(tg.edge() - oracle::frozen::x11_edge_sigma3) <= 1e-14);
    CHECK(std::abs(fam.elements(mu + kPi, mu).x11 - tg.edge()) <= 1e-14);
    CHECK(std::abs(fam.elements(mu - kPi, mu).x11 - oracle::frozen::x11_edge_sigma3) <= 1e-5);
  }
  SUBCASE("eigenvalues: lambda_1 = 0, lambda_2 = 2 x11") {
    for (double u = -3.1; u <= 3.1; u += 0.1) {
      const PovmElements e = fam.elements(mu + u, mu);
      const double off = std::hypot(e.x12, e.y12);
      if (std::abs(u) > 1e-12) {
        CHECK(std::abs(e.x11 - off) <= 1e-12);
        CHECK(std::abs(e.x11 + off - 2.0 * e.x11) <= 1e-12);
      }
      CHECK(e.x11 == Approx(tg.w(u)).epsilon(1e-13));
      CHECK(e.x12 == doctest::Approx(std::tan(mu) * e.y12).epsilon(1e-12));
    }
  }
  SUBCASE("sgn(0) = 0 at the centre") {
    const PovmElements e = fam.elements(mu, mu);
    CHECK(e.x12 == 0.0);
    CHECK(e.y12 == 0.0);
  }
  SUBCASE("one jump at the centre moving with the parameter") {
    const auto jumps = fam.discontinuities(mu);
    REQUIRE(jumps.size() == 1u);
    CHECK(jumps[0].location == mu);
    CHECK(jumps[0].velocity == 1.0);
    const PovmElements left = fam.elements(mu - 1e-12, mu);
    const PovmElements right = fam.elements(mu + 1e-12, mu);
    CHECK(jumps[0].jump.y12 == Approx(right.y12 - left.y12).epsilon(1e-9));
    CHECK(jumps[0].jump.x12 == Approx(right.x12 - left.x12).epsilon(1e-9));
    CHECK(fam.breakpoints(mu) == std::vector<double>{mu});
  }
  SUBCASE("parameter derivative matches central differences away from the jump") {
    const double h = 1e-6;
    for (double x : {mu - 2.0, mu - 0.4, mu + 0.3, mu + 2.5}) {
      const PovmElements d = fam.param_derivative(x, mu);
      const PovmElements a = fam.elements(x, mu + h);
      const PovmElements b = fam.elements(x, mu - h);
      CHECK(std::abs(d.x11 - (a.x11 - b.x11) / (2 * h)) <= 1e-8);
      CHECK(std::abs(d.x12 - (a.x12 - b.x12) / (2 * h)) <= 1e-8);
      CHECK(std::abs(d.y12 - (a.y12 - b.y12) / (2 * h)) <= 1e-8);
    }
  }
  CHECK_THROWS_AS(gaussian_sharp_family(3.0, EstimationContext(QubitState(0.5, 1.0, kPi / 2))),
                  ConstructionError);
  CHECK_THROWS_AS(gaussian_sharp_family(0.0, ctx), ConstructionError);
}

TEST_CASE("validation of the sharp family") {
  for (const QubitState& s : standard_grid()) {
    const EstimationContext ctx(s);
    const ValidationReport rep = validate_povm(gaussian_sharp_family(3.0, ctx), ctx);
    CHECK(rep.ok());
    CHECK(rep.completeness_residual <= 1e-10);
    CHECK(rep.x12_mean_residual <= 1e-9);
    CHECK(rep.y12_mean_residual <= 1e-9);
    CHECK(rep.max_lambda1 <= 1e-12);
    CHECK(rep.symmetry_residual <= 1e-9);
    CHECK(rep.unbiasedness_residual <= 1e-8);
    CHECK(rep.sign_conditions);
  }
}

TEST_CASE("validation flags broken families") {
  const EstimationContext ctx(kReferenceState);
  SUBCASE("unnormalised x11") {
    const ValidationReport rep = validate_povm(testing_support::scaled_family(1.1, ctx), ctx);
    CHECK_FALSE(rep.complete);
    CHECK(rep.completeness_residual == Approx(0.1).epsilon(1e-9));
    CHECK_FALSE(rep.ok());
    CHECK_FALSE(rep.flags.empty());
  }
  SUBCASE("reversed sign pattern") {
    const ValidationReport rep = validate_povm(testing_support::reversed_sign_family(ctx), ctx);
    CHECK_FALSE(rep.sign_conditions);
    CHECK(rep.complete);
  }
  SUBCASE("too much coupling breaks positivity") {
    const PovmFamily fam =
        sharp_profile_family(truncated_gaussian_profile(3.0), 1.2, ctx, "over-coupled");
    const ValidationReport rep = validate_povm(fam, ctx);
    CHECK_FALSE(rep.positive);
    CHECK(rep.min_eigenvalue < 0.0);
  }
  SUBCASE("off-centre diagonal family is biased") {
    const ValidationReport rep =
        validate_povm(testing_support::fixed_diagonal_family(ctx.state.phi() + 0.3), ctx);
    CHECK_FALSE(rep.unbiased);
    CHECK(rep.unbiasedness_residual == Approx(0.3).epsilon(1e-9));
  }
}

TEST_CASE("outcome distribution") {
  SUBCASE("q = x11 at the construction point") {
    const EstimationContext ctx(kReferenceState);
    const PovmFamily fam = gaussian_sharp_family(3.0, ctx);
    const OutcomeDensity q = outcome_distribution(ctx, fam);
    for (double x = q.window().lo; x <= q.window().hi; x += 0.2) {
      CHECK(std::abs(q(x) - fam.elements(x, ctx.construct_phi).x11) <= 1e-15);
    }
  }
  SUBCASE("r = 0 gives q = x11 for any construction point") {
    const EstimationContext ctx(QubitState(0.0, 1.0, 0.4), 0.0, 0.9);
    const PovmFamily fam = gaussian_sharp_family(3.0, ctx);
    const OutcomeDensity q = outcome_distribution(ctx, fam);
    CHECK(std::abs(q(1.5) - fam.elements(1.5, 0.9).x11) <= 1e-15);
  }
  SUBCASE("normalised on the grid") {
    for (const QubitState& s : standard_grid()) {
      const EstimationContext ctx(s, 0.1);
      const OutcomeDensity q = outcome_distribution(ctx, gaussian_sharp_family(3.0, ctx));
      CHECK(std::abs(integrate(q, q.window().lo, q.window().hi, q.split_spec({})) - 1.0) <= 1e-9);
    }
  }
  SUBCASE("negative density is rejected with the offending outcome") {
    const EstimationContext built(QubitState(0.9, kPi / 2, 0.3), 0.0, 0.3 + kPi / 2);
    const PovmFamily fam = sharp_profile_family(truncated_gaussian_profile(3.0), -1.5, built, "bad");
    try {
      (void)outcome_distribution(built, fam);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("phi_hat =") != std::string::npos);
    }
  }
}

TEST_CASE("estimator moments") {
  const oracle::TruncatedGaussian tg{3.0};
  SUBCASE("pinned variance") {
    const EstimationContext ctx(kReferenceState);
    const EstimatorMoments m = estimator_moments(ctx, gaussian_sharp_family(3.0, ctx));
    CHECK(std::abs(m.mean - ctx.state.phi()) <= 1e-9);
    CHECK(std::abs(m.variance - tg.second_moment()) <= 1e-12);
    CHECK(std::abs(m.variance - oracle::frozen::variance_sigma3) <= 1e-3);
  }
  SUBCASE("shifted window") {
    for (double eps : {-0.4, 0.25}) {
      const EstimationContext ctx(kReferenceState, eps);
      const EstimatorMoments m = estimator_moments(ctx, gaussian_sharp_family(3.0, ctx));
      CHECK(std::abs(m.mean - (ctx.state.phi() + eps)) <= 1e-9);
      CHECK(m.variance == Approx(tg.second_moment() + eps * eps).epsilon(1e-10));
    }
  }
}

TEST_CASE("tabulated families and CSV import") {
  const EstimationContext ctx(kReferenceState);
  const PovmFamily sharp = gaussian_sharp_family(3.0, ctx);
  const auto rows = tabulate(sharp, ctx.construct_phi, 2001);
  std::stringstream csv;
  write_povm_csv(csv, rows);
  const auto back = read_povm_csv(csv);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].phi_hat == rows[i].phi_hat);
    CHECK(back[i].x11 == rows[i].x11);
    CHECK(back[i].y12 == rows[i].y12);
  }
  const PovmFamily tab = tabulated_family(back);
  const Window w = tab.window(0.0);
  CHECK(w.lo == rows.front().phi_hat);
  CHECK(w.hi == rows.back().phi_hat);
  const double x = rows[10].phi_hat + 0.25 * (rows[11].phi_hat - rows[10].phi_hat);
  CHECK(tab.elements(x, 0.0).x11 ==
        Approx(0.75 * rows[10].x11 + 0.25 * rows[11].x11).epsilon(1e-15));
  CHECK(tab.param_derivative(x, 0.0).x11 == 0.0);
  const ValidationReport rep = validate_povm(tab, ctx);
  CHECK(rep.completeness_residual <= 1e-5);
  CHECK(rep.positive);

  SUBCASE("malformed input") {
    std::istringstream wrong_header("phi,x11,x12,y12\n0,1,0,0\n");
    CHECK_THROWS_AS(read_povm_csv(wrong_header), ConstructionError);
    std::istringstream short_row("phi_hat,x11,x12,y12\n0,1,0\n");
    CHECK_THROWS_WITH_AS(read_povm_csv(short_row), doctest::Contains("line 2"), ConstructionError);
    std::istringstream junk("phi_hat,x11,x12,y12\n# comment\n\n0,abc,0,0\n");
    CHECK_THROWS_WITH_AS(read_povm_csv(junk), doctest::Contains("line 4"), ConstructionError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_povm_csv(empty), ConstructionError);
    CHECK_THROWS_AS(tabulated_family({{0.0, 1, 0, 0}}), ConstructionError);
    CHECK_THROWS_AS(tabulated_family({{0.0, 1, 0, 0}, {0.0, 1, 0, 0}}), ConstructionError);
  }
}

TEST_CASE("sampling") {
  const EstimationContext ctx(kReferenceState);
  const OutcomeDensity q = outcome_distribution(ctx, gaussian_sharp_family(3.0, ctx));
  SUBCASE("reproducible and empty for n = 0") {
    CHECK(sample_outcomes(q, 0, 1).empty());
    CHECK(sample_outcomes(q, 1000, 42) == sample_outcomes(q, 1000, 42));
    CHECK(sample_outcomes(q, 1000, 42) != sample_outcomes(q, 1000, 43));
  }
  SUBCASE("cumulative grid") {
    const InverseCdfSampler sampler(q);
    CHECK(sampler.abscissae().size() >= InverseCdfSampler::kMinNodes);
    CHECK(sampler.cumulative().front() == 0.0);
    CHECK(sampler.cumulative().back() == 1.0);
    CHECK(std::is_sorted(sampler.cumulative().begin(), sampler.cumulative().end()));
    const auto& xs = sampler.abscissae();
    CHECK(std::find(xs.begin(), xs.end(), ctx.construct_phi) != xs.end());
  }
  SUBCASE("moments converge") {
    const double truth = oracle::TruncatedGaussian{3.0}.second_moment();
    for (std::size_t n : {std::size_t{10000}, std::size_t{100000}}) {
      const auto xs = sample_outcomes(q, n, 20261016);
      const double m = mean(xs);
      const double v = variance_about(xs, ctx.state.phi());
      double m4 = 0.0;
      for (double x : xs) m4 += std::pow(x - ctx.state.phi(), 4);
      m4 /= static_cast<double>(n);
      const double nd = static_cast<double>(n);
      CHECK(std::abs(m - ctx.state.phi()) <= 3.0 * std::sqrt(v / nd));
      CHECK(std::abs(v - truth) <= 3.0 * std::sqrt((m4 - v * v) / nd));
    }
  }
  SUBCASE("uniform01 stays in [0, 1)") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10000; ++i) {
      const double u = uniform01(rng);
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
  }
}
