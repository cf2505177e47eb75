#include "qbound/derivatives.hpp"

#include <cmath>
#include <sstream>

#include "qbound/error.hpp"
#include "qbound/phasespace.hpp"

namespace qbound {

namespace {

// ln((1-r)/(1+r)) without the loss in 1 - r for small r.
double log_ratio(double r) { return std::log1p(-2.0 * r / (1.0 + r)); }

// Vector-part coefficient of h_1: 1/2 + 3 K~/(4 r^3) - K~/(4 r).
double radial_deviation_vector(double r) {
  if (r < kSeriesRadius) {
    const double r2 = r * r;
    return -r2 * (2.0 / 15.0 + r2 * (4.0 / 35.0 + r2 * (2.0 / 21.0)));
  }
  const double kt = k_tilde_over_r3(r);
  return 0.5 + 0.75 * kt - 0.25 * r * r * kt;
}

Vec3 scaled(const Vec3& v, double s) { return {s * v[0], s * v[1], s * v[2]}; }

}  // namespace

void require_working_domain(double r, const char* operation) {
  if (!WorkingDomain::contains(r)) {
    std::ostringstream os;
    os << operation << ": r = " << r << " outside the working domain [" << WorkingDomain::r_min
       << ", " << WorkingDomain::r_max << "]";
    throw DomainError(os.str());
  }
}

double k_over_r3(double r) {
  if (r < kSeriesRadius) {
    const double r2 = r * r;
    return 4.0 / 3.0 + r2 * (4.0 / 15.0 + r2 * (4.0 / 35.0));
  }
  return (2.0 * r + (1.0 - r * r) * log_ratio(r)) / (r * r * r);
}

double k_tilde_over_r3(double r) {
  if (r < kSeriesRadius) {
    const double r2 = r * r;
    return -(2.0 / 3.0 + r2 * (2.0 / 5.0 + r2 * (2.0 / 7.0)));
  }
  return (2.0 * r + log_ratio(r)) / (r * r * r);
}

CoefficientK CoefficientK::at(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("K(r) is defined for r in (0, 1)");
  const double r3 = r * r * r;
  return {k_over_r3(r) * r3, k_tilde_over_r3(r) * r3};
}

double deviation_coefficient(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("h_3r(r) is defined for r in (0, 1)");
  if (r < kSeriesRadius) {
    const double r2 = r * r;
    return r * r2 * (1.0 / 10.0 + r2 * (3.0 / 70.0 + r2 * (1.0 / 42.0)));
  }
  return (6.0 * r - 4.0 * r * r * r + 3.0 * (1.0 - r * r) * log_ratio(r)) / (8.0 * r * r);
}

std::array<HermitianOp2, 3> new_log_derivatives(const QubitState& state, Evaluation method,
                                                const QuadSpec& sphere) {
  require_working_domain(state.r(), "new_log_derivative");
  if (method == Evaluation::Quadrature) {
    return sphere_integrate(
        [&](double t1, double p1) {
          const double q = husimi(state, t1, p1);
          const Vec3 dq = husimi_gradient(state, t1, p1);
          const HermitianOp2 kernel = sw_kernel(t1, p1, 1.0);
          return std::array<HermitianOp2, 3>{(dq[0] / q) * kernel, (dq[1] / q) * kernel,
                                             (dq[2] / q) * kernel};
        },
        sphere);
  }
  const double r = state.r();
  // L_1 = K~/(2 r^3) (r I - 3 n.sigma)
  const double radial = 0.5 * k_tilde_over_r3(r);
  // L_2, L_3 = 3K/(4 r^2) e_theta.sigma, 3K/(4 r^2) sin(theta) e_phi.sigma
  const double angular = 0.75 * k_over_r3(r) * r;
  return {HermitianOp2::from_pauli(radial * r, scaled(state.direction(), -3.0 * radial)),
          HermitianOp2::from_pauli(0.0, scaled(state.e_theta(), angular)),
          HermitianOp2::from_pauli(0.0, scaled(state.e_phi(), angular * std::sin(state.theta())))};
}

HermitianOp2 new_log_derivative(const QubitState& state, ParamIndex k, Evaluation method,
                                const QuadSpec& sphere) {
  if (method == Evaluation::ClosedForm) {
    return new_log_derivatives(state, method, sphere)[slot(k)];
  }
  require_working_domain(state.r(), "new_log_derivative");
  return sphere_integrate(
      [&](double t1, double p1) {
        const double q = husimi(state, t1, p1);
        const double dq = husimi_gradient(state, t1, p1)[slot(k)];
        return (dq / q) * sw_kernel(t1, p1, 1.0);
      },
      sphere);
}

HermitianOp2 sld(const QubitState& state, ParamIndex k) {
  if (state.r() >= 1.0) {
    throw DomainError("sld: eigenvalue sum vanishes for a pure state (r = 1)");
  }
  const HermitianOp2 rho = density_matrix(state);
  const Complex2x2 drho = d_rho(state, k).matrix();
  const Eigensystem2 es = eig2(rho);
  const Complex2x2 v(es.vectors[0][0], es.vectors[1][0], es.vectors[0][1], es.vectors[1][1]);
  Complex2x2 in_basis = v.adjoint() * drho * v;
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      const double denom = es.values[a] + es.values[b];
      if (denom <= 0.0) throw DomainError("sld: eigenvalue sum is not positive");
      in_basis(a, b) *= 2.0 / denom;
    }
  }
  return HermitianOp2::from_matrix(v * in_basis * v.adjoint(), 1e-10);
}

Complex2x2 rld(const QubitState& state, ParamIndex k) {
  const HermitianOp2 rho_inv = inverse(density_matrix(state));
  return rho_inv * d_rho(state, k);
}

std::array<HermitianOp2, 3> deviation_operators(const QubitState& state, DeviationMethod method,
                                                const QuadSpec& sphere) {
  require_working_domain(state.r(), "deviation_h");
  if (method == DeviationMethod::Definitional) {
    const HermitianOp2 rho = density_matrix(state);
    const auto ls = new_log_derivatives(state, Evaluation::Quadrature, sphere);
    std::array<HermitianOp2, 3> h;
    for (ParamIndex k : kAllParams) {
      h[slot(k)] = d_rho(state, k) - jordan_product(rho, ls[slot(k)]);
    }
    return h;
  }
  const double r = state.r();
  const double h3r = deviation_coefficient(r);
  // h_1 = K~/(2 r^2) I + c(r) n.sigma; h_2 = -h_3r e_theta.sigma; h_3 = -h_3r sin(theta) e_phi.sigma
  return {HermitianOp2::from_pauli(0.5 * r * k_tilde_over_r3(r),
                                   scaled(state.direction(), radial_deviation_vector(r))),
          HermitianOp2::from_pauli(0.0, scaled(state.e_theta(), -h3r)),
          HermitianOp2::from_pauli(0.0, scaled(state.e_phi(), -h3r * std::sin(state.theta())))};
}

HermitianOp2 deviation_h(const QubitState& state, ParamIndex k, DeviationMethod method,
                         const QuadSpec& sphere) {
  return deviation_operators(state, method, sphere)[slot(k)];
}

}  // namespace qbound
