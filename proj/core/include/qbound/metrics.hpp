#pragma once

// Metric tensors on the qubit state manifold, in coordinates (r, theta, phi).
//
// Angular components use dn^2 = r^2 (dtheta^2 + sin^2(theta) dphi^2), so an
// "angular coefficient" c contributes c r^2 to g_thetatheta and
// c r^2 sin^2(theta) to g_phiphi.

#include <array>
#include <string>
#include <vector>

#include "qbound/derivatives.hpp"
#include "qbound/measurement.hpp"
#include "qbound/quadrature.hpp"
#include "qbound/qubit.hpp"

namespace qbound {

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Eigenvalues of the symmetric part of `m`, ascending (cyclic Jacobi).
std::array<double, 3> symmetric_eigenvalues(const Matrix3& m);

/// max |m_ij - m_ji|.
double asymmetry(const Matrix3& m);

/// Diagonal metric diag(radial, angular r^2, angular r^2 sin^2 theta).
Matrix3 diagonal_metric(const QubitState& state, double radial, double angular);

enum class MetricMethod { ClosedForm, Trace };

/// g_ij = tr(rho (L_i L_j + L_j L_i)/2) with the phase-space derivatives L_k.
/// The trace route builds the L_k by sphere quadrature.
Matrix3 new_metric(const QubitState& state, MetricMethod method,
                   const QuadSpec& sphere = default_sphere_spec());

/// g_ij = tr(rho (L_i L_j + L_j L_i)/2) with the SLD. Defined for r < 1.
Matrix3 sld_metric(const QubitState& state);

/// g_ij = Re tr(d_i rho rho^{-1} d_j rho). Defined for r < 1.
Matrix3 rld_metric(const QubitState& state);

/// Operator-monotone function f with f(1) = 1 and f(t) = t f(1/t).
struct MonotoneSpec {
  enum class Kind { SLD, RLD, KuboMori };
  Kind kind;

  std::string name() const;
  double f(double t) const;
  double g(double t) const { return 1.0 / f(t); }

  static MonotoneSpec sld() { return {Kind::SLD}; }
  static MonotoneSpec rld() { return {Kind::RLD}; }
  static MonotoneSpec kubo_mori() { return {Kind::KuboMori}; }
  static std::array<MonotoneSpec, 3> all() { return {sld(), rld(), kubo_mori()}; }
};

struct MonotoneCoefficients {
  double radial;   ///< 1/(1 - r^2)
  double angular;  ///< g((1-r)/(1+r)) / (1+r)
};

/// Coefficients of the monotone metric for `spec` at radius r in (0, 1).
MonotoneCoefficients monotone_metric(const MonotoneSpec& spec, double r);

enum class HusimiMethod { ClosedForm, Quadrature };

/// Fisher metric of the Husimi function, E_Q[d_i log Q d_j log Q].
Matrix3 husimi_classical_metric(const QubitState& state, HusimiMethod method,
                                const QuadSpec& sphere = default_sphere_spec());

/// Classical Fisher information for phi of p0(phi_hat) = tr[rho(phi) Pi(phi_hat; p)]
/// with the family frozen at p = ctx.construct_phi; the derivative acts on rho only.
/// Throws ValidationError where p0 <= 0 while its derivative is nonzero.
double measurement_fisher(const EstimationContext& ctx, const PovmFamily& family,
                          const QuadSpec& spec = {});

struct MonotoneEntry {
  std::string name;
  MonotoneCoefficients coefficients;
};

struct MetricReport {
  double r = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  Matrix3 new_metric{};
  Matrix3 sld_metric{};
  Matrix3 rld_metric{};
  Matrix3 husimi_classical{};
  std::vector<MonotoneEntry> monotone;
};

/// All closed-form metrics at `state` (which must lie in the working domain).
MetricReport metric_report(const QubitState& state);

}  // namespace qbound
