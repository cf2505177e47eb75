#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qbound/linalg.hpp"
#include "qbound/phasespace.hpp"
#include "qbound/qubit.hpp"
#include "qbound/selftest.hpp"

using namespace qbound;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("kernel examples") {
  CHECK(max_abs_diff(sw_kernel(0.0, 0.7, -1.0), HermitianOp2::from_pauli(0.5, 0.0, 0.0, 0.5)) <
        1e-15);
  CHECK(max_abs_diff(sw_kernel(0.0, 0.7, 1.0), HermitianOp2::from_pauli(0.5, 0.0, 0.0, 1.5)) <
        1e-15);
  const Complex2x2 m = sw_kernel(0.0, 0.0, 1.0).matrix();
  CHECK(m(0, 0).real() == Approx(2.0));
  CHECK(m(1, 1).real() == Approx(-1.0));
  for (double s : {-1.0, 0.0, 0.5, 1.0}) {
    CHECK(sw_kernel(1.2, 4.0, s).trace() == Approx(1.0));
  }
  const Complex2x2 k = sw_kernel(0.8, 1.9, 1.0).matrix();
  CHECK(std::abs(k(0, 1) - 1.5 * std::polar(std::sin(0.8), -1.9)) < 1e-15);
  CHECK(kernel_index_tested(-1.0));
  CHECK(kernel_index_tested(1.0));
  CHECK_FALSE(kernel_index_tested(0.0));
}

TEST_CASE("Weyl symbols") {
  const auto one = weyl_map(HermitianOp2::identity(), 1.0);
  CHECK(one(0.3, 2.0) == Approx(1.0));
  const auto z = weyl_map(HermitianOp2::pauli_z(), -1.0);
  for (double t : {0.0, 0.5, 2.0, kPi}) CHECK(z(t, 1.1) == Approx(std::cos(t)));
}

TEST_CASE("Husimi function examples") {
  const QubitState s(0.6, 1.0, 2.0);
  CHECK(husimi(QubitState(0.0, 1.0, 1.0), 0.4, 0.2) == Approx(0.5));
  CHECK(husimi(s, 1.0, 2.0) == Approx(0.8));
  CHECK(husimi(s, kPi - 1.0, 2.0 + kPi) == Approx(0.2));
  const auto q = husimi(s);
  const auto via_symbol = weyl_map(density_matrix(s), -1.0);
  for (double t = 0.0; t <= kPi; t += 0.25) {
    for (double p = 0.0; p < 2 * kPi; p += 0.3) {
      CHECK(std::abs(q(t, p) - via_symbol(t, p)) <= 1e-13);
      CHECK(q(t, p) >= 0.2 - 1e-12);
      CHECK(q(t, p) <= 0.8 + 1e-12);
    }
  }
}

TEST_CASE("Husimi gradient matches central differences") {
  const QubitState s(0.4, 0.9, 1.3);
  const double h = 1e-6;
  for (double t : {0.2, 1.5, 2.8}) {
    for (double p : {0.1, 3.0}) {
      const Vec3 g = husimi_gradient(s, t, p);
      for (ParamIndex k : kAllParams) {
        const double x = s.coordinate(k);
        const double fd =
            (husimi(s.with(k, x + h), t, p) - husimi(s.with(k, x - h), t, p)) / (2 * h);
        CHECK(std::abs(fd - g[slot(k)]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("inverse Weyl map round-trips the Pauli basis") {
  for (double s : {-1.0, 1.0}) {
    for (const HermitianOp2& a : {HermitianOp2::identity(), HermitianOp2::pauli_x(),
                                  HermitianOp2::pauli_y(), HermitianOp2::pauli_z()}) {
      CHECK(max_abs_diff(inverse_weyl(weyl_map(a, s), s), a) <= 1e-10);
    }
  }
  CHECK(max_abs_diff(inverse_weyl([](double, double) { return 1.0; }, 1.0),
                     HermitianOp2::identity()) <= 1e-10);
}

TEST_CASE("symbol cos(theta) for s = +1 inverts to sigma_z / 3") {
  const HermitianOp2 a = inverse_weyl([](double t, double) { return std::cos(t); }, 1.0);
  CHECK(max_abs_diff(a, HermitianOp2::from_pauli(0.0, 0.0, 0.0, 1.0 / 3.0)) <= 1e-10);
  const auto back = weyl_map(a, 1.0);
  CHECK(back(0.7, 0.1) == Approx(std::cos(0.7)));
}

TEST_CASE("density matrices round-trip through the Husimi symbol on the standard grid") {
  for (const QubitState& s : standard_grid()) {
    const HermitianOp2 rho = density_matrix(s);
    CHECK(max_abs_diff(inverse_weyl(weyl_map(rho, -1.0), -1.0), rho) <= 1e-10);
  }
}
