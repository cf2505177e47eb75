#include "qbound/qubit.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qbound/error.hpp"

namespace qbound {

std::string_view name(ParamIndex k) {
  switch (k) {
    case ParamIndex::R: return "r";
    case ParamIndex::Theta: return "theta";
    case ParamIndex::Phi: return "phi";
  }
  return "?";
}

QubitState::QubitState(double r, double theta, double phi) : r_(r), theta_(theta), phi_(phi) {
  std::ostringstream os;
  if (!std::isfinite(r) || r < 0.0 || r > 1.0) {
    os << "Bloch radius r = " << r << " outside [0, 1]";
  } else if (!std::isfinite(theta) || theta < 0.0 || theta > std::numbers::pi) {
    os << "polar angle theta = " << theta << " outside [0, pi]";
  } else if (!std::isfinite(phi)) {
    os << "azimuth phi is not finite";
  }
  if (!os.str().empty()) throw DomainError(os.str());
}

double QubitState::coordinate(ParamIndex k) const {
  switch (k) {
    case ParamIndex::R: return r_;
    case ParamIndex::Theta: return theta_;
    case ParamIndex::Phi: return phi_;
  }
  return 0.0;
}

QubitState QubitState::with(ParamIndex k, double value) const {
  switch (k) {
    case ParamIndex::R: return {value, theta_, phi_};
    case ParamIndex::Theta: return {r_, value, phi_};
    case ParamIndex::Phi: return {r_, theta_, value};
  }
  return *this;
}

Vec3 QubitState::direction() const {
  const double st = std::sin(theta_);
  return {st * std::cos(phi_), st * std::sin(phi_), std::cos(theta_)};
}

Vec3 QubitState::e_theta() const {
  const double ct = std::cos(theta_);
  return {ct * std::cos(phi_), ct * std::sin(phi_), -std::sin(theta_)};
}

Vec3 QubitState::e_phi() const { return {-std::sin(phi_), std::cos(phi_), 0.0}; }

HermitianOp2 density_matrix(const QubitState& state) {
  const Vec3 n = state.direction();
  const double h = 0.5 * state.r();
  return HermitianOp2::from_pauli(0.5, h * n[0], h * n[1], h * n[2]);
}

HermitianOp2 d_rho(const QubitState& state, ParamIndex k) {
  Vec3 v{};
  double scale = 0.5;
  switch (k) {
    case ParamIndex::R:
      v = state.direction();
      break;
    case ParamIndex::Theta:
      v = state.e_theta();
      scale *= state.r();
      break;
    case ParamIndex::Phi:
      v = state.e_phi();
      scale *= state.r() * std::sin(state.theta());
      break;
  }
  return HermitianOp2::from_pauli(0.0, scale * v[0], scale * v[1], scale * v[2]);
}

}  // namespace qbound
