#pragma once

// Variance bounds for estimating phi with a parameter-dependent POVM.
//
// With Pi = Pi(phi_hat; phi + eps) and q = tr[rho Pi], the coefficients
//
//   a = phi   int tr(rho dPi/dphi) dphi_hat
//   b = 1  -  int phi_hat tr(rho dPi/dphi) dphi_hat
//
// are integrated over the window [phi + eps - pi, phi + eps + pi] with its
// limits held fixed. dPi/dphi is taken in the distributional sense, so jumps
// of the family that move with phi contribute point terms. Unless stated
// otherwise the family is evaluated at parameter p = state.phi().

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qbound/measurement.hpp"
#include "qbound/metrics.hpp"
#include "qbound/quadrature.hpp"

namespace qbound {

struct AbCoefficients {
  double a = 0.0;
  double b = 0.0;
};

AbCoefficients ab_coefficients(const EstimationContext& ctx, const PovmFamily& family,
                               const QuadSpec& spec = {});

/// b for the truncated-Gaussian sharp family of width sigma at eps = 0:
/// 2 pi w(pi) + 2 r sin(theta) int_0^pi u w(u) du.
double gaussian_b_closed_form(double sigma, double r, double theta);

/// Edge contribution of the moving window to d/dphi of int (phi_hat - phi) q:
/// hi'(hi - phi) q(hi) - lo'(lo - phi) q(lo).
double moving_window_boundary_term(const EstimationContext& ctx, const PovmFamily& family);

struct BoundC {
  double a = 0.0;
  double b = 0.0;
  double h_term = 0.0;  ///< tr int (phi_hat - phi) h_3 Pi
  double value = 0.0;   ///< (a + b - h_term)^2
};

BoundC bound_C(const EstimationContext& ctx, const PovmFamily& family, const QuadSpec& spec = {});

struct CmaxBreakdown {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;  ///< a + b
  double I1 = 0.0;
  double I2 = 0.0;
  double h3r = 0.0;
  double C = 0.0;
  double C_max = 0.0;
  bool c_nonnegative = false;
  bool sign_conditions = false;
  /// C <= C_max is guaranteed only when both flags hold.
  bool upper_bound_valid() const { return c_nonnegative && sign_conditions; }
};

/// I1 = int_{mu-pi}^{mu} [(phi_hat - mu) x11 + eps y12/cos(phi)],
/// I2 = int_{mu}^{mu+pi} (phi_hat - phi) x11,
/// C_max = (c - 2 h3r sin(theta) (I1 - I2))^2.
CmaxBreakdown bound_Cmax(const EstimationContext& ctx, const PovmFamily& family,
                         const QuadSpec& spec = {});

struct BoundProblem {
  EstimationContext ctx;
  PovmFamily povm;
  Vec3 Y{0.0, 0.0, 1.0};
  Vec3 Z{0.0, 0.0, 1.0};
};

struct TheoremResult {
  double variance = 0.0;  ///< Y^t V Y
  double zgz = 0.0;       ///< Z^t G Z with the phase-space metric
  double lhs = 0.0;       ///< variance * zgz
  std::complex<double> bracket;  ///< Y^t (A + B) Z - tr int T_xi T_h Pi
  double rhs = 0.0;       ///< |bracket|^2
  double imag_residual = 0.0;
};

/// Both sides of the general inequality. Only phi is estimated, so Y must be
/// a multiple of e_3; Z is arbitrary. Throws ConstructionError for other Y
/// and ValidationError when the family is not unbiased.
TheoremResult theorem_general(const BoundProblem& problem, const QuadSpec& spec = {});

struct AuditReport {
  double identity_lhs = 0.0;      ///< tr int (phi_hat - phi) d_phi rho Pi
  double a_plus_b = 0.0;          ///< A + B with fixed window limits
  double residual_eq72 = 0.0;     ///< a_plus_b - identity_lhs
  double boundary_term = 0.0;     ///< moving-window edge contribution
  double boundary_mismatch = 0.0; ///< residual_eq72 - boundary_term
  double re_trace = 0.0;          ///< Re tr int rho T_L Pi T_xi
  double bracket_real = 0.0;      ///< Re of the theorem bracket
  double bracket_real_residual = 0.0;  ///< bracket_real - re_trace
  double imag_residual = 0.0;     ///< |Im bracket|
  double schwarz_lhs = 0.0;       ///< (tr int rho T_xi Pi T_xi)(tr int rho T_L Pi T_L)
  double schwarz_mid = 0.0;       ///< |tr int rho T_L Pi T_xi|^2
  double schwarz_rhs = 0.0;       ///< |bracket|^2
  double schwarz_slack = 0.0;     ///< schwarz_lhs - schwarz_mid
  double bracket_slack = 0.0;     ///< schwarz_mid - schwarz_rhs
  double trace_TL_Pi_TL = 0.0;    ///< tr int rho T_L Pi T_L
  double zgz = 0.0;
  double zgz_residual = 0.0;      ///< trace_TL_Pi_TL - zgz
};

AuditReport audit_derivation(const BoundProblem& problem, const QuadSpec& spec = {});

struct SweepOptions {
  std::vector<double> r_values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  double theta = 1.5707963267948966;
  double phi = 2.356194490192345;
  double eps = 0.0;
  double sigma = 3.0;
  QuadSpec spec{};

  /// steps equally spaced radii from r_min to r_max inclusive.
  static std::vector<double> grid(double r_min, double r_max, int steps);
};

struct SweepRow {
  double r = 0.0;
  double B_max = 0.0;
  double B_SLD = 0.0;
  double B_RLD = 0.0;
  double B_Fisher = 0.0;
  double B_Husimi = 0.0;
  double v = 0.0;
  double vg_minus_C = 0.0;
  bool ok = false;
  std::string error;
};

/// One row per radius; a failing row is marked and the sweep continues.
std::vector<SweepRow> bounds_sweep(const SweepOptions& options);

}  // namespace qbound
