#pragma once

// Operator logarithmic derivatives of the qubit state.
//
// Three constructions are provided:
//   - the phase-space derivative: d_k log Q mapped back to an operator with
//     the s = +1 kernel, available in closed form and by sphere quadrature;
//   - the symmetric logarithmic derivative (SLD), d_k rho = (rho L + L rho)/2;
//   - the right logarithmic derivative (RLD), d_k rho = rho L.
// The deviation operators h_k = d_k rho - (rho L_k + L_k rho)/2 measure how far
// the phase-space derivative is from satisfying the SLD equation.

#include <array>

#include "qbound/linalg.hpp"
#include "qbound/quadrature.hpp"
#include "qbound/qubit.hpp"

namespace qbound {

enum class LogDerivKind { NewPhaseSpace, SLD, RLD };

enum class Evaluation { ClosedForm, Quadrature };
enum class DeviationMethod { ClosedForm, Definitional };

/// Radii where the phase-space constructions are evaluated. Outside this
/// range operations throw DomainError.
struct WorkingDomain {
  static constexpr double r_min = 1e-6;
  static constexpr double r_max = 1.0 - 1e-6;
  static bool contains(double r) { return r >= r_min && r <= r_max; }
};

/// Below this radius the coefficient functions switch to series expansions.
inline constexpr double kSeriesRadius = 1e-2;

/// K(r) = 2r + (1 - r^2) ln((1-r)/(1+r)) and K~(r) = 2r + ln((1-r)/(1+r)).
///
/// These recur throughout the closed forms: the angular phase-space
/// derivatives carry 3K/(4r^2), the radial one K~/(2r^3). K > 0 and K~ < 0 on
/// (0, 1), with K ~ (4/3) r^3 and K~ ~ -(2/3) r^3 near zero.
struct CoefficientK {
  double k;
  double k_tilde;

  static CoefficientK at(double r);
};

/// K(r)/r^3 and K~(r)/r^3, evaluated without cancellation near r = 0.
double k_over_r3(double r);
double k_tilde_over_r3(double r);

/// h_{3r}(r) = (6r - 4r^3 + 3(1-r^2) ln((1-r)/(1+r))) / (8 r^2).
double deviation_coefficient(double r);

/// Phase-space logarithmic derivative L_k.
HermitianOp2 new_log_derivative(const QubitState& state, ParamIndex k, Evaluation method,
                                const QuadSpec& sphere = default_sphere_spec());

/// All three L_k; the quadrature route shares one pass over the sphere.
std::array<HermitianOp2, 3> new_log_derivatives(const QubitState& state, Evaluation method,
                                                const QuadSpec& sphere = default_sphere_spec());

/// SLD by the eigenbasis formula L_ab = 2 (d_k rho)_ab / (lambda_a + lambda_b).
/// Defined for r in [0, 1).
HermitianOp2 sld(const QubitState& state, ParamIndex k);

/// RLD L = rho^{-1} d_k rho. Defined while rho is invertible (r < 1).
Complex2x2 rld(const QubitState& state, ParamIndex k);

/// Deviation operator h_k. The definitional route uses the quadrature L_k.
HermitianOp2 deviation_h(const QubitState& state, ParamIndex k, DeviationMethod method,
                         const QuadSpec& sphere = default_sphere_spec());

std::array<HermitianOp2, 3> deviation_operators(const QubitState& state, DeviationMethod method,
                                                const QuadSpec& sphere = default_sphere_spec());

/// Throws DomainError naming `operation` when r is outside the working domain.
void require_working_domain(double r, const char* operation);

}  // namespace qbound
