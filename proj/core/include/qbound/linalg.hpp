#pragma once

// 2x2 complex matrices and Hermitian operators for a single qubit.
//
// HermitianOp2 is stored in the Pauli basis, A = a0*I + ax*X + ay*Y + az*Z,
// with real coefficients, so Hermiticity holds by construction and traces of
// products reduce to dot products.

#include <array>
#include <complex>
#include <cstddef>

namespace qbound {

using cplx = std::complex<double>;

class Complex2x2 {
 public:
  constexpr Complex2x2() = default;
  constexpr Complex2x2(cplx a00, cplx a01, cplx a10, cplx a11)
      : e_{a00, a01, a10, a11} {}

  static constexpr Complex2x2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  cplx operator()(std::size_t i, std::size_t j) const { return e_[2 * i + j]; }
  cplx& operator()(std::size_t i, std::size_t j) { return e_[2 * i + j]; }

  cplx trace() const { return e_[0] + e_[3]; }
  cplx determinant() const { return e_[0] * e_[3] - e_[1] * e_[2]; }
  Complex2x2 adjoint() const;

  /// Largest |entry|.
  double max_abs() const;

  /// Entry (1,0) equals conj(entry(0,1)) and the diagonal is real, within tol.
  bool is_hermitian(double tol = 1e-14) const;

  Complex2x2& operator+=(const Complex2x2& o);
  Complex2x2& operator-=(const Complex2x2& o);
  Complex2x2& operator*=(cplx s);

  friend Complex2x2 operator+(Complex2x2 a, const Complex2x2& b) { return a += b; }
  friend Complex2x2 operator-(Complex2x2 a, const Complex2x2& b) { return a -= b; }
  friend Complex2x2 operator*(Complex2x2 a, cplx s) { return a *= s; }
  friend Complex2x2 operator*(cplx s, Complex2x2 a) { return a *= s; }
  friend Complex2x2 operator*(const Complex2x2& a, const Complex2x2& b);

 private:
  std::array<cplx, 4> e_{};
};

class HermitianOp2 {
 public:
  constexpr HermitianOp2() = default;

  static constexpr HermitianOp2 from_pauli(double a0, double ax, double ay, double az) {
    HermitianOp2 h;
    h.c_ = {a0, ax, ay, az};
    return h;
  }
  static constexpr HermitianOp2 from_pauli(double a0, const std::array<double, 3>& v) {
    return from_pauli(a0, v[0], v[1], v[2]);
  }
  /// Throws ConstructionError when `m` is not Hermitian within `tol`.
  static HermitianOp2 from_matrix(const Complex2x2& m, double tol = 1e-12);

  static constexpr HermitianOp2 identity() { return from_pauli(1, 0, 0, 0); }
  static constexpr HermitianOp2 pauli_x() { return from_pauli(0, 1, 0, 0); }
  static constexpr HermitianOp2 pauli_y() { return from_pauli(0, 0, 1, 0); }
  static constexpr HermitianOp2 pauli_z() { return from_pauli(0, 0, 0, 1); }

  double scalar_part() const { return c_[0]; }
  std::array<double, 3> vector_part() const { return {c_[1], c_[2], c_[3]}; }
  const std::array<double, 4>& pauli() const { return c_; }

  double trace() const { return 2.0 * c_[0]; }
  Complex2x2 matrix() const;
  cplx operator()(std::size_t i, std::size_t j) const;

  HermitianOp2& operator+=(const HermitianOp2& o);
  HermitianOp2& operator-=(const HermitianOp2& o);
  HermitianOp2& operator*=(double s);

  friend HermitianOp2 operator+(HermitianOp2 a, const HermitianOp2& b) { return a += b; }
  friend HermitianOp2 operator-(HermitianOp2 a, const HermitianOp2& b) { return a -= b; }
  friend HermitianOp2 operator-(HermitianOp2 a) { return a *= -1.0; }
  friend HermitianOp2 operator*(HermitianOp2 a, double s) { return a *= s; }
  friend HermitianOp2 operator*(double s, HermitianOp2 a) { return a *= s; }
  friend Complex2x2 operator*(const HermitianOp2& a, const HermitianOp2& b) {
    return a.matrix() * b.matrix();
  }

 private:
  std::array<double, 4> c_{};
};

/// tr(AB) for Hermitian A, B (always real).
double trace_product(const HermitianOp2& a, const HermitianOp2& b);

/// Jordan product (AB + BA)/2.
HermitianOp2 jordan_product(const HermitianOp2& a, const HermitianOp2& b);

/// Inverse of an invertible Hermitian operator. Throws DomainError when singular.
HermitianOp2 inverse(const HermitianOp2& a);

double max_abs_diff(const Complex2x2& a, const Complex2x2& b);
double max_abs_diff(const HermitianOp2& a, const HermitianOp2& b);

using Vector2c = std::array<cplx, 2>;

struct Eigensystem2 {
  std::array<double, 2> values;      // ascending
  std::array<Vector2c, 2> vectors;   // vectors[k] belongs to values[k]
};

/// Eigen-decomposition of a Hermitian operator. Each eigenvector has its first
/// nonzero component real and positive.
Eigensystem2 eig2(const HermitianOp2& h);

/// As above; throws ConstructionError if `m` is not Hermitian (tolerance 1e-12).
Eigensystem2 eig2(const Complex2x2& m);

}  // namespace qbound
