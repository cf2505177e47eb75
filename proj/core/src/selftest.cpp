#include "qbound/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "qbound/bounds.hpp"
#include "qbound/derivatives.hpp"
#include "qbound/format.hpp"
#include "qbound/measurement.hpp"
#include "qbound/metrics.hpp"
#include "qbound/phasespace.hpp"

namespace qbound {

namespace {

constexpr double kPi = std::numbers::pi;

double matrix_diff(const Matrix3& a, const Matrix3& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  return worst;
}

std::vector<QubitState> grid(const std::vector<double>& rs) {
  std::vector<QubitState> out;
  for (double r : rs)
    for (double theta : {kPi / 6.0, kPi / 2.0})
      for (double phi : {0.3, 0.75 * kPi}) out.emplace_back(r, theta, phi);
  return out;
}

// Residual check: passes when value <= tolerance.
CheckResult residual(std::string name, double tolerance, const std::function<double()>& fn) {
  CheckResult c{std::move(name), false, 0.0, tolerance, {}};
  try {
    c.value = fn();
    c.passed = c.value <= tolerance;
  } catch (const std::exception& e) {
    c.detail = e.what();
    return c;
  }
  c.detail = "worst " + format_number(c.value, 6) + " (limit " + format_number(tolerance, 3) + ")";
  return c;
}

// Slack check: passes when value >= -tolerance.
CheckResult slack(std::string name, double tolerance, const std::function<double()>& fn) {
  CheckResult c{std::move(name), false, 0.0, tolerance, {}};
  try {
    c.value = fn();
    c.passed = c.value >= -tolerance;
  } catch (const std::exception& e) {
    c.detail = e.what();
    return c;
  }
  c.detail = "min slack " + format_number(c.value, 6) + " (limit -" + format_number(tolerance, 3) +
             ")";
  return c;
}

}  // namespace

std::vector<QubitState> standard_grid() { return grid({0.1, 0.5, 0.9}); }

std::vector<QubitState> closed_form_grid() {
  return grid({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
}

std::vector<CheckResult> run_selftest() {
  std::vector<CheckResult> out;
  const auto std_grid = standard_grid();
  const auto cf_grid = closed_form_grid();

  out.push_back(residual("d_rho vs central differences", 1e-9, [&] {
    double worst = 0.0;
    const double h = 1e-6;
    for (const auto& s : std_grid) {
      for (ParamIndex k : kAllParams) {
        const double x = s.coordinate(k);
        const auto fd = (1.0 / (2.0 * h)) * (density_matrix(s.with(k, x + h)) -
                                             density_matrix(s.with(k, x - h)));
        worst = std::max(worst, max_abs_diff(fd, d_rho(s, k)));
      }
    }
    return worst;
  }));

  out.push_back(residual("Weyl roundtrip of rho (s = -1)", 1e-10, [&] {
    double worst = 0.0;
    for (const auto& s : std_grid) {
      const HermitianOp2 rho = density_matrix(s);
      worst = std::max(worst, max_abs_diff(rho, inverse_weyl(weyl_map(rho, -1.0), -1.0)));
    }
    return worst;
  }));

  out.push_back(residual("Husimi normalisation", 1e-10, [&] {
    double worst = 0.0;
    for (const auto& s : std_grid) {
      const double total = sphere_integrate(
          [&](double t, double p) { return husimi(s, t, p); }, default_sphere_spec());
      worst = std::max(worst, std::abs(total - 1.0));
    }
    return worst;
  }));

  out.push_back(residual("kernel sphere average", 1e-10, [&] {
    double worst = 0.0;
    for (double sidx : {-1.0, 1.0}) {
      const HermitianOp2 avg = sphere_integrate(
          [&](double t, double p) { return sw_kernel(t, p, sidx); }, default_sphere_spec());
      worst = std::max(worst, max_abs_diff(avg, HermitianOp2::identity()));
    }
    return worst;
  }));

  out.push_back(residual("log derivatives closed vs quadrature", 1e-8, [&] {
    double worst = 0.0;
    for (const auto& s : cf_grid) {
      const auto a = new_log_derivatives(s, Evaluation::ClosedForm);
      const auto b = new_log_derivatives(s, Evaluation::Quadrature);
      for (std::size_t k = 0; k < 3; ++k) worst = std::max(worst, max_abs_diff(a[k], b[k]));
    }
    return worst;
  }));

  out.push_back(residual("deviation operators closed vs definitional", 1e-8, [&] {
    double worst = 0.0;
    for (const auto& s : cf_grid) {
      const auto a = deviation_operators(s, DeviationMethod::ClosedForm);
      const auto b = deviation_operators(s, DeviationMethod::Definitional);
      for (std::size_t k = 0; k < 3; ++k) worst = std::max(worst, max_abs_diff(a[k], b[k]));
    }
    return worst;
  }));

  out.push_back(residual("new metric closed vs trace", 1e-8, [&] {
    double worst = 0.0;
    for (const auto& s : cf_grid) {
      worst = std::max(worst, matrix_diff(new_metric(s, MetricMethod::ClosedForm),
                                          new_metric(s, MetricMethod::Trace)));
    }
    return worst;
  }));

  out.push_back(residual("Husimi metric closed vs quadrature", 1e-8, [&] {
    double worst = 0.0;
    for (const auto& s : cf_grid) {
      worst = std::max(worst, matrix_diff(husimi_classical_metric(s, HusimiMethod::ClosedForm),
                                          husimi_classical_metric(s, HusimiMethod::Quadrature)));
    }
    return worst;
  }));

  out.push_back(residual("SLD and RLD phi-phi closed forms", 1e-9, [&] {
    double worst = 0.0;
    for (const auto& s : cf_grid) {
      const double sin2 = std::sin(s.theta()) * std::sin(s.theta());
      const double r2 = s.r() * s.r();
      worst = std::max(worst, std::abs(sld_metric(s)[2][2] - r2 * sin2));
      worst = std::max(worst, std::abs(rld_metric(s)[2][2] - r2 * sin2 / (1.0 - r2)));
    }
    return worst;
  }));

  out.push_back(slack("metric hierarchy Fisher <= SLD <= RLD", 1e-9, [&] {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& s : cf_grid) {
      const EstimationContext ctx(s);
      const double fisher = measurement_fisher(ctx, gaussian_sharp_family(3.0, ctx));
      const double g_sld = sld_metric(s)[2][2];
      const double g_rld = rld_metric(s)[2][2];
      worst = std::min({worst, g_sld - fisher, g_rld - g_sld});
    }
    return worst;
  }));

  out.push_back(residual("sharp family validation", 1e-9, [&] {
    double worst = 0.0;
    for (const auto& s : std_grid) {
      const EstimationContext ctx(s);
      const ValidationReport rep = validate_povm(gaussian_sharp_family(3.0, ctx), ctx);
      if (!rep.ok() || !rep.sign_conditions) throw ValidationError("sharp family failed validation");
      worst = std::max({worst, rep.completeness_residual, rep.unbiasedness_residual,
                        rep.x12_mean_residual, rep.y12_mean_residual, rep.symmetry_residual});
    }
    return worst;
  }));

  out.push_back(residual("b quadrature vs closed form", 1e-7, [&] {
    double worst = 0.0;
    for (const auto& s : cf_grid) {
      const EstimationContext ctx(s);
      const AbCoefficients ab = ab_coefficients(ctx, gaussian_sharp_family(3.0, ctx));
      worst = std::max({worst, std::abs(ab.a),
                        std::abs(ab.b - gaussian_b_closed_form(3.0, s.r(), s.theta()))});
    }
    return worst;
  }));

  out.push_back(residual("C equals C_max for the sharp family", 1e-9, [&] {
    double worst = 0.0;
    for (const auto& s : cf_grid) {
      const EstimationContext ctx(s);
      const CmaxBreakdown cm = bound_Cmax(ctx, gaussian_sharp_family(3.0, ctx));
      worst = std::max(worst, std::abs(cm.C - cm.C_max));
    }
    return worst;
  }));

  out.push_back(slack("Schwarz chain slack", 1e-10, [&] {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& s : cf_grid) {
      const EstimationContext ctx(s);
      const AuditReport rep = audit_derivation({ctx, gaussian_sharp_family(3.0, ctx)});
      worst = std::min(worst, rep.schwarz_slack);
    }
    return worst;
  }));

  out.push_back(residual("identity residual equals moving-window term", 1e-9, [&] {
    double worst = 0.0;
    for (const auto& s : cf_grid) {
      const EstimationContext ctx(s);
      const AuditReport rep = audit_derivation({ctx, gaussian_sharp_family(3.0, ctx)});
      worst = std::max({worst, std::abs(rep.boundary_mismatch), rep.imag_residual,
                        std::abs(rep.bracket_real_residual - rep.boundary_term), std::abs(rep.zgz_residual)});
    }
    return worst;
  }));

  out.push_back(residual("panel doubling stability", 1e-10, [&] {
    double worst = 0.0;
    const QuadSpec base{};
    const QubitState s(0.5, kPi / 2.0, 0.75 * kPi);
    const EstimationContext ctx(s);
    const PovmFamily fam = gaussian_sharp_family(3.0, ctx);
    const auto values = [&](const QuadSpec& spec) {
      return std::array<double, 4>{bound_Cmax(ctx, fam, spec).C_max,
                                   estimator_moments(ctx, fam, spec).variance,
                                   measurement_fisher(ctx, fam, spec),
                                   ab_coefficients(ctx, fam, spec).b};
    };
    const auto a = values(base);
    const auto b = values(base.refined());
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    const QuadSpec sph = default_sphere_spec();
    worst = std::max(worst, matrix_diff(new_metric(s, MetricMethod::Trace, sph),
                                        new_metric(s, MetricMethod::Trace, sph.refined())));
    return worst;
  }));

  return out;
}

}  // namespace qbound
