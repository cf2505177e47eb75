#include "qbound/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qbound/error.hpp"

namespace qbound {

Complex2x2 Complex2x2::adjoint() const {
  return {std::conj(e_[0]), std::conj(e_[2]), std::conj(e_[1]), std::conj(e_[3])};
}

double Complex2x2::max_abs() const {
  double m = 0.0;
  for (const auto& v : e_) m = std::max(m, std::abs(v));
  return m;
}

bool Complex2x2::is_hermitian(double tol) const {
  return std::abs(e_[2] - std::conj(e_[1])) <= tol && std::abs(e_[0].imag()) <= tol &&
         std::abs(e_[3].imag()) <= tol;
}

Complex2x2& Complex2x2::operator+=(const Complex2x2& o) {
  for (std::size_t i = 0; i < 4; ++i) e_[i] += o.e_[i];
  return *this;
}

Complex2x2& Complex2x2::operator-=(const Complex2x2& o) {
  for (std::size_t i = 0; i < 4; ++i) e_[i] -= o.e_[i];
  return *this;
}

Complex2x2& Complex2x2::operator*=(cplx s) {
  for (auto& v : e_) v *= s;
  return *this;
}

Complex2x2 operator*(const Complex2x2& a, const Complex2x2& b) {
  return {a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
          a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)};
}

HermitianOp2 HermitianOp2::from_matrix(const Complex2x2& m, double tol) {
  if (!m.is_hermitian(tol)) {
    std::ostringstream os;
    os << "matrix is not Hermitian: |m10 - conj(m01)| = " << std::abs(m(1, 0) - std::conj(m(0, 1)))
       << ", Im m00 = " << m(0, 0).imag() << ", Im m11 = " << m(1, 1).imag();
    throw ConstructionError(os.str());
  }
  // Project onto the Hermitian part so sub-tolerance asymmetry is discarded.
  const cplx off = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  const double d0 = m(0, 0).real();
  const double d1 = m(1, 1).real();
  return from_pauli(0.5 * (d0 + d1), off.real(), -off.imag(), 0.5 * (d0 - d1));
}

Complex2x2 HermitianOp2::matrix() const {
  const auto& [a0, ax, ay, az] = c_;
  return {cplx(a0 + az, 0.0), cplx(ax, -ay), cplx(ax, ay), cplx(a0 - az, 0.0)};
}

cplx HermitianOp2::operator()(std::size_t i, std::size_t j) const {
  const auto& [a0, ax, ay, az] = c_;
  if (i == j) return i == 0 ? cplx(a0 + az) : cplx(a0 - az);
  return i == 0 ? cplx(ax, -ay) : cplx(ax, ay);
}

HermitianOp2& HermitianOp2::operator+=(const HermitianOp2& o) {
  for (std::size_t i = 0; i < 4; ++i) c_[i] += o.c_[i];
  return *this;
}

HermitianOp2& HermitianOp2::operator-=(const HermitianOp2& o) {
  for (std::size_t i = 0; i < 4; ++i) c_[i] -= o.c_[i];
  return *this;
}

HermitianOp2& HermitianOp2::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

double trace_product(const HermitianOp2& a, const HermitianOp2& b) {
  const auto& x = a.pauli();
  const auto& y = b.pauli();
  return 2.0 * (x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3]);
}

HermitianOp2 jordan_product(const HermitianOp2& a, const HermitianOp2& b) {
  // (a0 + a.s)(b0 + b.s) = a0 b0 + a.b + (a0 b + b0 a).s + i (a x b).s; the
  // cross-product term is antisymmetric and drops out.
  const auto& x = a.pauli();
  const auto& y = b.pauli();
  return HermitianOp2::from_pauli(x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3],
                                  x[0] * y[1] + y[0] * x[1], x[0] * y[2] + y[0] * x[2],
                                  x[0] * y[3] + y[0] * x[3]);
}

HermitianOp2 inverse(const HermitianOp2& a) {
  const auto& c = a.pauli();
  const double det = c[0] * c[0] - (c[1] * c[1] + c[2] * c[2] + c[3] * c[3]);
  const double scale = std::max(c[0] * c[0], 1e-300);
  if (std::abs(det) <= 1e-14 * scale) {
    throw DomainError("operator is singular (determinant " + std::to_string(det) + ")");
  }
  return HermitianOp2::from_pauli(c[0] / det, -c[1] / det, -c[2] / det, -c[3] / det);
}

double max_abs_diff(const Complex2x2& a, const Complex2x2& b) { return (a - b).max_abs(); }

double max_abs_diff(const HermitianOp2& a, const HermitianOp2& b) {
  return (a - b).matrix().max_abs();
}

namespace {

void fix_phase(Vector2c& v) {
  const std::size_t lead = std::abs(v[0]) > 1e-14 ? 0 : 1;
  const double mag = std::abs(v[lead]);
  if (mag == 0.0) return;
  const cplx phase = std::conj(v[lead]) / mag;
  v[0] *= phase;
  v[1] *= phase;
  v[lead] = cplx(v[lead].real(), 0.0);
}

}  // namespace

Eigensystem2 eig2(const HermitianOp2& h) {
  const auto& [a0, ax, ay, az] = h.pauli();
  const double rho = std::hypot(ax, ay, az);
  Eigensystem2 es;
  es.values = {a0 - rho, a0 + rho};
  if (rho == 0.0) {
    es.vectors = {Vector2c{1.0, 0.0}, Vector2c{0.0, 1.0}};
    return es;
  }
  // Upper eigenvector of a.s, choosing the well-conditioned of two equivalent forms.
  Vector2c up = az >= 0.0 ? Vector2c{cplx(rho + az, 0.0), cplx(ax, ay)}
                          : Vector2c{cplx(ax, -ay), cplx(rho - az, 0.0)};
  const double norm = std::sqrt(std::norm(up[0]) + std::norm(up[1]));
  up[0] /= norm;
  up[1] /= norm;
  Vector2c down{-std::conj(up[1]), std::conj(up[0])};
  fix_phase(up);
  fix_phase(down);
  es.vectors = {down, up};
  return es;
}

Eigensystem2 eig2(const Complex2x2& m) { return eig2(HermitianOp2::from_matrix(m, 1e-12)); }

}  // namespace qbound
