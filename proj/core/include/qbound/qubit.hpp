#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "qbound/linalg.hpp"

namespace qbound {

/// State coordinates xi = (r, theta, phi), always in this order.
enum class ParamIndex : int { R = 1, Theta = 2, Phi = 3 };

inline constexpr std::array<ParamIndex, 3> kAllParams{ParamIndex::R, ParamIndex::Theta,
                                                      ParamIndex::Phi};

/// Zero-based slot of a parameter in 3-vectors and 3x3 tensors.
constexpr std::size_t slot(ParamIndex k) { return static_cast<std::size_t>(k) - 1; }

std::string_view name(ParamIndex k);

using Vec3 = std::array<double, 3>;

/// Bloch-parameterised qubit state. r is the Bloch radius in [0, 1], theta the
/// polar angle in [0, pi]; phi is any finite azimuth (periodic).
class QubitState {
 public:
  /// Throws DomainError when a coordinate is out of range or not finite.
  QubitState(double r, double theta, double phi);

  double r() const { return r_; }
  double theta() const { return theta_; }
  double phi() const { return phi_; }

  double coordinate(ParamIndex k) const;
  QubitState with(ParamIndex k, double value) const;

  /// Unit direction n and the tangent frame (e_theta, e_phi).
  Vec3 direction() const;
  Vec3 e_theta() const;
  Vec3 e_phi() const;

 private:
  double r_;
  double theta_;
  double phi_;
};

/// rho = (I + r n.sigma)/2.
HermitianOp2 density_matrix(const QubitState& state);

/// Analytic partial derivative of the density matrix with respect to xi^k.
HermitianOp2 d_rho(const QubitState& state, ParamIndex k);

}  // namespace qbound
