#include "qbound/bounds.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qbound/derivatives.hpp"
#include "qbound/error.hpp"

namespace qbound {

namespace {

constexpr double kPi = std::numbers::pi;

EstimationContext along_state(const EstimationContext& ctx) {
  return EstimationContext(ctx.state, ctx.eps, ctx.state.phi());
}

// int f(phi_hat) tr(rho dPi/dp) over the fixed window, point terms included.
template <class F>
double weighted_param_derivative(const EstimationContext& ctx, const PovmFamily& family,
                                 const QuadSpec& spec, F&& f) {
  const double p = ctx.state.phi();
  const HermitianOp2 rho = density_matrix(ctx.state);
  const Window w = family.window(p);
  double total = integrate(
      [&](double x) { return f(x) * trace_product(rho, family.param_derivative(x, p).op()); },
      w.lo, w.hi, family.split_spec(spec, p));
  for (const auto& d : family.discontinuities(p)) {
    if (!(d.location > w.lo && d.location < w.hi)) continue;
    total -= f(d.location) * trace_product(rho, d.jump.op()) * d.velocity;
  }
  return total;
}

// Splits strictly inside (lo, hi).
QuadSpec clipped(const QuadSpec& spec, const std::vector<double>& points, double lo, double hi) {
  std::vector<double> inside;
  for (double x : points)
    if (x > lo && x < hi) inside.push_back(x);
  return spec.with_split_points(std::move(inside));
}

double unbiasedness_residual(const EstimationContext& ctx, const PovmFamily& family,
                             const QuadSpec& spec) {
  const double p = ctx.state.phi();
  const HermitianOp2 rho = density_matrix(ctx.state);
  const Window w = family.window(p);
  const double target = ctx.state.phi() + ctx.eps;
  return integrate(
      [&](double x) { return (x - target) * trace_product(rho, family.elements(x, p).op()); },
      w.lo, w.hi, family.split_spec(spec, p));
}

HermitianOp2 combine(const std::array<HermitianOp2, 3>& ops, const Vec3& z) {
  return z[0] * ops[0] + z[1] * ops[1] + z[2] * ops[2];
}

struct TheoremParts {
  TheoremResult result;
  AbCoefficients ab;
};

TheoremParts theorem_parts(const BoundProblem& problem, const QuadSpec& spec) {
  const Vec3& Y = problem.Y;
  const Vec3& Z = problem.Z;
  for (double c : Y)
    if (!std::isfinite(c)) throw ConstructionError("theorem: Y must be finite");
  for (double c : Z)
    if (!std::isfinite(c)) throw ConstructionError("theorem: Z must be finite");
  if (Y[0] != 0.0 || Y[1] != 0.0) {
    throw ConstructionError("theorem: only phi is estimated, so Y must be a multiple of e_3");
  }
  if (Y[2] == 0.0 && Z[0] == 0.0 && Z[1] == 0.0 && Z[2] == 0.0) {
    throw ConstructionError("theorem: Y and Z are both zero");
  }

  const EstimationContext ctx = along_state(problem.ctx);
  const QubitState& state = ctx.state;
  const PovmFamily& family = problem.povm;
  const double p = state.phi();
  const double phi = state.phi();
  const HermitianOp2 rho = density_matrix(state);
  const Window w = family.window(p);
  const QuadSpec qs = family.split_spec(spec, p);
  const double y3 = Y[2];

  TheoremParts out;
  TheoremResult& res = out.result;
  const double var = integrate(
      [&](double x) { return (x - phi) * (x - phi) * trace_product(rho, family.elements(x, p).op()); },
      w.lo, w.hi, qs);
  res.variance = y3 * y3 * var;

  const Matrix3 g = new_metric(state, MetricMethod::ClosedForm);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) res.zgz += Z[i] * g[i][j] * Z[j];
  res.lhs = res.variance * res.zgz;

  out.ab = ab_coefficients(ctx, family, spec);
  const HermitianOp2 t_h = combine(deviation_operators(state, DeviationMethod::ClosedForm), Z);
  const cplx h_trace = integrate(
      [&](double x) { return (y3 * (x - phi)) * (t_h * family.elements(x, p).op()).trace(); },
      w.lo, w.hi, qs);
  res.bracket = y3 * Z[2] * (out.ab.a + out.ab.b) - h_trace;
  res.rhs = std::norm(res.bracket);
  res.imag_residual = std::abs(res.bracket.imag());
  return out;
}

}  // namespace

AbCoefficients ab_coefficients(const EstimationContext& ctx, const PovmFamily& family,
                               const QuadSpec& spec) {
  const double phi = ctx.state.phi();
  const double zeroth = weighted_param_derivative(ctx, family, spec, [](double) { return 1.0; });
  const double first = weighted_param_derivative(ctx, family, spec, [](double x) { return x; });
  return {phi * zeroth, 1.0 - first};
}

double gaussian_b_closed_form(double sigma, double r, double theta) {
  if (!(sigma > 0.0)) throw ConstructionError("sigma must be positive");
  const double e = std::erf(kPi / (sigma * std::numbers::sqrt2));
  const double tail = std::exp(-kPi * kPi / (2.0 * sigma * sigma));
  const double edge = tail / (sigma * std::sqrt(2.0 * kPi) * e);
  const double half_moment = sigma * (1.0 - tail) / (std::sqrt(2.0 * kPi) * e);
  return 2.0 * kPi * edge + 2.0 * r * std::sin(theta) * half_moment;
}

double moving_window_boundary_term(const EstimationContext& ctx, const PovmFamily& family) {
  const double p = ctx.state.phi();
  const double phi = ctx.state.phi();
  const HermitianOp2 rho = density_matrix(ctx.state);
  const Window w = family.window(p);
  const Window v = family.window_velocity();
  const double q_hi = trace_product(rho, family.elements(w.hi, p).op());
  const double q_lo = trace_product(rho, family.elements(w.lo, p).op());
  return v.hi * (w.hi - phi) * q_hi - v.lo * (w.lo - phi) * q_lo;
}

BoundC bound_C(const EstimationContext& ctx, const PovmFamily& family, const QuadSpec& spec) {
  const double p = ctx.state.phi();
  const double phi = ctx.state.phi();
  const Window w = family.window(p);
  const HermitianOp2 h3 = deviation_h(ctx.state, ParamIndex::Phi, DeviationMethod::ClosedForm);
  BoundC out;
  const AbCoefficients ab = ab_coefficients(ctx, family, spec);
  out.a = ab.a;
  out.b = ab.b;
  out.h_term = integrate(
      [&](double x) { return (x - phi) * trace_product(h3, family.elements(x, p).op()); }, w.lo,
      w.hi, family.split_spec(spec, p));
  const double inner = out.a + out.b - out.h_term;
  out.value = inner * inner;
  return out;
}

CmaxBreakdown bound_Cmax(const EstimationContext& ctx, const PovmFamily& family,
                         const QuadSpec& spec) {
  const QubitState& state = ctx.state;
  const double p = state.phi();
  const double phi = state.phi();
  const double cphi = std::cos(phi);
  if (std::abs(cphi) < 1e-12) throw DomainError("bound_Cmax: cos(phi) must be nonzero");
  const Window w = family.window(p);
  const double mid = w.centre();
  const std::vector<double> breaks = family.breakpoints(p);

  const BoundC bc = bound_C(ctx, family, spec);
  CmaxBreakdown out;
  out.a = bc.a;
  out.b = bc.b;
  out.c = bc.a + bc.b;
  out.C = bc.value;
  out.h3r = deviation_coefficient(state.r());
  out.I1 = integrate(
      [&](double x) {
        const PovmElements e = family.elements(x, p);
        return (x - mid) * e.x11 + ctx.eps * e.y12 / cphi;
      },
      w.lo, mid, clipped(spec, breaks, w.lo, mid));
  out.I2 = integrate([&](double x) { return (x - phi) * family.elements(x, p).x11; }, mid, w.hi,
                     clipped(spec, breaks, mid, w.hi));
  const double inner = out.c - 2.0 * out.h3r * std::sin(state.theta()) * (out.I1 - out.I2);
  out.C_max = inner * inner;
  out.c_nonnegative = out.c >= 0.0;
  out.sign_conditions = validate_povm(family, along_state(ctx), spec).sign_conditions;
  return out;
}

TheoremResult theorem_general(const BoundProblem& problem, const QuadSpec& spec) {
  const EstimationContext ctx = along_state(problem.ctx);
  const double residual = std::abs(unbiasedness_residual(ctx, problem.povm, spec));
  if (residual > ValidationTolerances{}.unbiasedness) {
    std::ostringstream os;
    os.precision(6);
    os << "theorem: family '" << problem.povm.name() << "' is biased (residual " << residual << ")";
    throw ValidationError(os.str());
  }
  return theorem_parts(problem, spec).result;
}

AuditReport audit_derivation(const BoundProblem& problem, const QuadSpec& spec) {
  const EstimationContext ctx = along_state(problem.ctx);
  const QubitState& state = ctx.state;
  const PovmFamily& family = problem.povm;
  const double p = state.phi();
  const double phi = state.phi();
  const HermitianOp2 rho = density_matrix(state);
  const HermitianOp2 drho = d_rho(state, ParamIndex::Phi);
  const Window w = family.window(p);
  const QuadSpec qs = family.split_spec(spec, p);
  const double y3 = problem.Y[2];

  const TheoremParts parts = theorem_parts(problem, spec);
  const HermitianOp2 t_l =
      combine(new_log_derivatives(state, Evaluation::ClosedForm), problem.Z);
  const Complex2x2 rho_tl = rho * t_l;

  // [identity_lhs, Re mid, Im mid, tr rho T_L Pi T_L]
  const auto sums = integrate(
      [&](double x) {
        const HermitianOp2 pi = family.elements(x, p).op();
        const cplx mid = (y3 * (x - phi)) * (rho_tl * pi.matrix()).trace();
        const cplx tlpitl = (rho_tl * (pi * t_l)).trace();
        return std::array<double, 4>{(x - phi) * trace_product(drho, pi), mid.real(), mid.imag(),
                                     tlpitl.real()};
      },
      w.lo, w.hi, qs);

  AuditReport rep;
  rep.identity_lhs = sums[0];
  rep.a_plus_b = parts.ab.a + parts.ab.b;
  rep.residual_eq72 = rep.a_plus_b - rep.identity_lhs;
  rep.boundary_term = moving_window_boundary_term(ctx, family);
  rep.boundary_mismatch = rep.residual_eq72 - rep.boundary_term;
  rep.re_trace = sums[1];
  rep.bracket_real = parts.result.bracket.real();
  rep.bracket_real_residual = rep.bracket_real - rep.re_trace;
  rep.imag_residual = parts.result.imag_residual;
  rep.trace_TL_Pi_TL = sums[3];
  rep.zgz = parts.result.zgz;
  rep.zgz_residual = rep.trace_TL_Pi_TL - rep.zgz;
  rep.schwarz_lhs = parts.result.variance * rep.trace_TL_Pi_TL;
  rep.schwarz_mid = sums[1] * sums[1] + sums[2] * sums[2];
  rep.schwarz_rhs = parts.result.rhs;
  rep.schwarz_slack = rep.schwarz_lhs - rep.schwarz_mid;
  rep.bracket_slack = rep.schwarz_mid - rep.schwarz_rhs;
  return rep;
}

std::vector<double> SweepOptions::grid(double r_min, double r_max, int steps) {
  if (steps < 1) throw ConstructionError("sweep needs at least one step");
  if (!(std::isfinite(r_min) && std::isfinite(r_max)) || r_min > r_max) {
    throw ConstructionError("sweep needs r_min <= r_max");
  }
  if (steps == 1) return {r_min};
  std::vector<double> rs;
  rs.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    rs.push_back(r_min + (r_max - r_min) * static_cast<double>(i) / static_cast<double>(steps - 1));
  }
  rs.back() = r_max;
  return rs;
}

std::vector<SweepRow> bounds_sweep(const SweepOptions& options) {
  std::vector<SweepRow> rows;
  rows.reserve(options.r_values.size());
  for (double r : options.r_values) {
    SweepRow row;
    row.r = r;
    try {
      const QubitState state(r, options.theta, options.phi);
      require_working_domain(r, "bounds_sweep");
      const EstimationContext ctx(state, options.eps);
      const PovmFamily family = gaussian_sharp_family(options.sigma, ctx);
      const CmaxBreakdown cm = bound_Cmax(ctx, family, options.spec);
      const double g = new_metric(state, MetricMethod::ClosedForm)[2][2];
      row.B_max = cm.C_max / g;
      row.B_SLD = 1.0 / sld_metric(state)[2][2];
      row.B_RLD = 1.0 / rld_metric(state)[2][2];
      row.B_Fisher = 1.0 / measurement_fisher(ctx, family, options.spec);
      row.B_Husimi = 1.0 / husimi_classical_metric(state, HusimiMethod::ClosedForm)[2][2];
      row.v = estimator_moments(ctx, family, options.spec).variance;
      row.vg_minus_C = row.v * g - cm.C;
      row.ok = std::isfinite(row.B_max) && std::isfinite(row.B_SLD) && std::isfinite(row.B_RLD) &&
               std::isfinite(row.B_Fisher) && std::isfinite(row.B_Husimi);
      if (!row.ok) row.error = "non-finite bound (degenerate state point)";
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qbound
