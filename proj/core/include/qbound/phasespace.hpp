#pragma once

// Spin-1/2 phase space: Stratonovich-Weyl kernel, the Weyl symbol map and its
// inverse, and the Husimi Q-function.
//
// Only kernel indices s = -1 (Husimi) and s = +1 are exercised; other values
// evaluate the same closed form but are reported as untested.

#include <functional>

#include "qbound/linalg.hpp"
#include "qbound/quadrature.hpp"
#include "qbound/qubit.hpp"

namespace qbound {

/// A real function on the sphere, called as f(theta1, phi1).
using PhaseSpaceFunction = std::function<double(double, double)>;

/// Delta(theta1, phi1; s) = (I + 3^{(1+s)/2} m.sigma)/2 with m the unit vector at (theta1, phi1).
HermitianOp2 sw_kernel(double theta1, double phi1, double s);

/// True for the kernel indices this library validates (s = -1, +1).
bool kernel_index_tested(double s);

/// tr[A Delta(theta1, phi1; s)].
double weyl_symbol(const HermitianOp2& a, double theta1, double phi1, double s);

/// F_A(.; s) as a callable.
PhaseSpaceFunction weyl_map(const HermitianOp2& a, double s);

/// Integral of F(Omega) Delta(Omega; -s) dmu(Omega): the operator whose
/// s-symbol is F.
HermitianOp2 inverse_weyl(const PhaseSpaceFunction& f, double s,
                          const QuadSpec& spec = default_sphere_spec());

/// Husimi function Q(theta1, phi1) = (1 + r n.m)/2 of `state`.
double husimi(const QubitState& state, double theta1, double phi1);
PhaseSpaceFunction husimi(const QubitState& state);

/// Partial derivatives (d/dr, d/dtheta, d/dphi) of Q at (theta1, phi1).
Vec3 husimi_gradient(const QubitState& state, double theta1, double phi1);

}  // namespace qbound
