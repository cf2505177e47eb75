#include "qbound/phasespace.hpp"

#include <cmath>

namespace qbound {

namespace {

Vec3 unit(double theta, double phi) {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

HermitianOp2 sw_kernel(double theta1, double phi1, double s) {
  const double k = 0.5 * std::pow(3.0, 0.5 * (1.0 + s));
  const Vec3 m = unit(theta1, phi1);
  return HermitianOp2::from_pauli(0.5, k * m[0], k * m[1], k * m[2]);
}

bool kernel_index_tested(double s) { return s == -1.0 || s == 1.0; }

double weyl_symbol(const HermitianOp2& a, double theta1, double phi1, double s) {
  return trace_product(a, sw_kernel(theta1, phi1, s));
}

PhaseSpaceFunction weyl_map(const HermitianOp2& a, double s) {
  return [a, s](double theta1, double phi1) { return weyl_symbol(a, theta1, phi1, s); };
}

HermitianOp2 inverse_weyl(const PhaseSpaceFunction& f, double s, const QuadSpec& spec) {
  return sphere_integrate(
      [&](double theta1, double phi1) { return f(theta1, phi1) * sw_kernel(theta1, phi1, -s); },
      spec);
}

double husimi(const QubitState& state, double theta1, double phi1) {
  return 0.5 * (1.0 + state.r() * dot(state.direction(), unit(theta1, phi1)));
}

PhaseSpaceFunction husimi(const QubitState& state) {
  return [state](double theta1, double phi1) { return husimi(state, theta1, phi1); };
}

Vec3 husimi_gradient(const QubitState& state, double theta1, double phi1) {
  const Vec3 m = unit(theta1, phi1);
  const double r = state.r();
  return {0.5 * dot(state.direction(), m), 0.5 * r * dot(state.e_theta(), m),
          0.5 * r * std::sin(state.theta()) * dot(state.e_phi(), m)};
}

}  // namespace qbound
