#include "qbound/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qbound/error.hpp"
#include "qbound/phasespace.hpp"

namespace qbound {

namespace {

Matrix3 gram(const HermitianOp2& rho, const std::array<HermitianOp2, 3>& ls) {
  Matrix3 g{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i; j < 3; ++j) {
      g[i][j] = trace_product(rho, jordan_product(ls[i], ls[j]));
      g[j][i] = g[i][j];
    }
  }
  return g;
}

void require_mixed(double r, const char* operation) {
  if (!(r < 1.0)) {
    throw DomainError(std::string(operation) + ": undefined for a pure state (r = 1)");
  }
}

}  // namespace

std::array<double, 3> symmetric_eigenvalues(const Matrix3& m) {
  Matrix3 a{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) a[i][j] = 0.5 * (m[i][j] + m[j][i]);

  for (int sweep = 0; sweep < 50; ++sweep) {
    const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if (off < 1e-300) break;
    for (std::size_t p = 0; p < 2; ++p) {
      for (std::size_t q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < 3; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < 3; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::array<double, 3> ev{a[0][0], a[1][1], a[2][2]};
  std::sort(ev.begin(), ev.end());
  return ev;
}

double asymmetry(const Matrix3& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) worst = std::max(worst, std::abs(m[i][j] - m[j][i]));
  return worst;
}

Matrix3 diagonal_metric(const QubitState& state, double radial, double angular) {
  const double r2 = state.r() * state.r();
  const double s = std::sin(state.theta());
  Matrix3 g{};
  g[0][0] = radial;
  g[1][1] = angular * r2;
  g[2][2] = angular * r2 * s * s;
  return g;
}

Matrix3 new_metric(const QubitState& state, MetricMethod method, const QuadSpec& sphere) {
  require_working_domain(state.r(), "new_metric");
  if (method == MetricMethod::Trace) {
    return gram(density_matrix(state),
                new_log_derivatives(state, Evaluation::Quadrature, sphere));
  }
  const double r = state.r();
  const double kt = k_tilde_over_r3(r);
  const double c = 0.75 * k_over_r3(r);  // 3K/(4 r^3)
  return diagonal_metric(state, 0.25 * (9.0 - 5.0 * r * r) * kt * kt, c * c);
}

Matrix3 sld_metric(const QubitState& state) {
  require_mixed(state.r(), "sld_metric");
  return gram(density_matrix(state), {sld(state, ParamIndex::R), sld(state, ParamIndex::Theta),
                                      sld(state, ParamIndex::Phi)});
}

Matrix3 rld_metric(const QubitState& state) {
  require_mixed(state.r(), "rld_metric");
  const HermitianOp2 rho_inv = inverse(density_matrix(state));
  std::array<HermitianOp2, 3> d;
  for (ParamIndex k : kAllParams) d[slot(k)] = d_rho(state, k);
  Matrix3 g{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      g[i][j] = (d[i] * rho_inv * d[j].matrix()).trace().real();
    }
  }
  return g;
}

std::string MonotoneSpec::name() const {
  switch (kind) {
    case Kind::SLD: return "SLD";
    case Kind::RLD: return "RLD";
    case Kind::KuboMori: return "KuboMori";
  }
  return "unknown";
}

double MonotoneSpec::f(double t) const {
  if (!(t > 0.0)) throw DomainError("monotone function needs t > 0");
  switch (kind) {
    case Kind::SLD: return 0.5 * (1.0 + t);
    case Kind::RLD: return 2.0 * t / (1.0 + t);
    case Kind::KuboMori: {
      const double x = t - 1.0;
      if (std::abs(x) < 1e-6) return 1.0 + x * (0.5 - x / 12.0);
      return x / std::log(t);
    }
  }
  return 1.0;
}

MonotoneCoefficients monotone_metric(const MonotoneSpec& spec, double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("monotone_metric: r must lie in (0, 1)");
  return {1.0 / (1.0 - r * r), spec.g((1.0 - r) / (1.0 + r)) / (1.0 + r)};
}

Matrix3 husimi_classical_metric(const QubitState& state, HusimiMethod method,
                                const QuadSpec& sphere) {
  require_working_domain(state.r(), "husimi_classical_metric");
  if (method == HusimiMethod::Quadrature) {
    const auto entries = sphere_integrate(
        [&](double t1, double p1) {
          const double q = husimi(state, t1, p1);
          const Vec3 d = husimi_gradient(state, t1, p1);
          return std::array<double, 6>{d[0] * d[0] / q, d[0] * d[1] / q, d[0] * d[2] / q,
                                       d[1] * d[1] / q, d[1] * d[2] / q, d[2] * d[2] / q};
        },
        sphere);
    return {{{entries[0], entries[1], entries[2]},
             {entries[1], entries[3], entries[4]},
             {entries[2], entries[4], entries[5]}}};
  }
  const double r = state.r();
  return diagonal_metric(state, -0.5 * k_tilde_over_r3(r), 0.25 * k_over_r3(r));
}

double measurement_fisher(const EstimationContext& ctx, const PovmFamily& family,
                          const QuadSpec& spec) {
  const double p = ctx.construct_phi;
  const HermitianOp2 rho = density_matrix(ctx.state);
  const HermitianOp2 drho = d_rho(ctx.state, ParamIndex::Phi);
  const Window w = family.window(p);
  return integrate(
      [&](double x) {
        const HermitianOp2 pi = family.elements(x, p).op();
        const double p0 = trace_product(rho, pi);
        const double dp0 = trace_product(drho, pi);
        if (p0 <= 0.0) {
          if (std::abs(dp0) <= 1e-14) return 0.0;
          std::ostringstream os;
          os.precision(12);
          os << "measurement_fisher: outcome density " << p0 << " is not positive at phi_hat = "
             << x << " while its derivative is " << dp0;
          throw ValidationError(os.str());
        }
        return dp0 * dp0 / p0;
      },
      w.lo, w.hi, family.split_spec(spec, p));
}

MetricReport metric_report(const QubitState& state) {
  MetricReport rep;
  rep.r = state.r();
  rep.theta = state.theta();
  rep.phi = state.phi();
  rep.new_metric = new_metric(state, MetricMethod::ClosedForm);
  rep.sld_metric = sld_metric(state);
  rep.rld_metric = rld_metric(state);
  rep.husimi_classical = husimi_classical_metric(state, HusimiMethod::ClosedForm);
  for (const auto& spec : MonotoneSpec::all()) {
    rep.monotone.push_back({spec.name(), monotone_metric(spec, state.r())});
  }
  return rep;
}

}  // namespace qbound
