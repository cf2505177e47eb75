#pragma once

// Fixed-order composite Gauss-Legendre quadrature on intervals and on the
// unit sphere. Results are summed in a fixed order, so a given QuadSpec gives
// bit-identical values on every run.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <span>
#include <type_traits>
#include <vector>

#include "qbound/error.hpp"
#include "qbound/linalg.hpp"

namespace qbound {

struct QuadSpec {
  int panels = 64;  ///< panels per sub-interval between split points
  int order = 16;   ///< Gauss-Legendre nodes per panel
  /// Interior abscissae where the integrand may jump; each sub-interval is
  /// integrated on its own.
  std::vector<double> split_points;

  QuadSpec with_split_points(std::vector<double> points) const {
    QuadSpec s = *this;
    s.split_points = std::move(points);
    return s;
  }
  /// Same rule with twice as many panels.
  QuadSpec refined() const {
    QuadSpec s = *this;
    s.panels *= 2;
    return s;
  }
};

/// Per-axis spec used for integrals over the sphere (theta and phi alike).
QuadSpec default_sphere_spec();

class GaussLegendreRule {
 public:
  explicit GaussLegendreRule(int order);

  int order() const { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

 private:
  std::vector<double> nodes_;    // on [-1, 1], ascending
  std::vector<double> weights_;
};

/// Shared rule for `order`; rules up to order 64 are built once and cached.
const GaussLegendreRule& gauss_legendre_rule(int order);

namespace detail {

inline void accumulate(double& acc, double w, double v) { acc += w * v; }
inline void accumulate(cplx& acc, double w, const cplx& v) { acc += w * v; }
inline void accumulate(HermitianOp2& acc, double w, const HermitianOp2& v) { acc += w * v; }
inline void accumulate(Complex2x2& acc, double w, const Complex2x2& v) { acc += cplx(w) * v; }
template <class T, std::size_t N>
void accumulate(std::array<T, N>& acc, double w, const std::array<T, N>& v) {
  for (std::size_t i = 0; i < N; ++i) accumulate(acc[i], w, v[i]);
}

inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
inline bool finite(const HermitianOp2& v) {
  for (double c : v.pauli())
    if (!std::isfinite(c)) return false;
  return true;
}
inline bool finite(const Complex2x2& v) {
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      if (!finite(v(i, j))) return false;
  return true;
}
template <class T, std::size_t N>
bool finite(const std::array<T, N>& v) {
  for (const auto& x : v)
    if (!finite(x)) return false;
  return true;
}

/// [a, split points..., b], validated.
std::vector<double> segment_bounds(double a, double b, const QuadSpec& spec);

[[noreturn]] void throw_non_finite(double x);
[[noreturn]] void throw_non_finite(double theta, double phi);

}  // namespace detail

/// Composite Gauss-Legendre integral of `f` over [a, b]. The value type may be
/// double, complex, HermitianOp2, Complex2x2 or a std::array of those.
template <class F>
auto integrate(F&& f, double a, double b, const QuadSpec& spec)
    -> std::decay_t<std::invoke_result_t<F&, double>> {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  const auto& rule = gauss_legendre_rule(spec.order);
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  const std::vector<double> bounds = detail::segment_bounds(a, b, spec);

  T total{};
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    const double width = (bounds[s + 1] - bounds[s]) / spec.panels;
    for (int p = 0; p < spec.panels; ++p) {
      const double lo = bounds[s] + p * width;
      const double half = 0.5 * width;
      const double mid = lo + half;
      T panel{};
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double x = mid + half * nodes[i];
        const T v = f(x);
        if (!detail::finite(v)) detail::throw_non_finite(x);
        detail::accumulate(panel, weights[i], v);
      }
      detail::accumulate(total, half, panel);
    }
  }
  return total;
}

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadSpec& spec);

/// The abscissae `integrate` would visit for [a, b] and `spec`, in order.
std::vector<double> quadrature_abscissae(double a, double b, const QuadSpec& spec);

/// Integral over the sphere with measure dmu = sin(theta) dtheta dphi / (2 pi),
/// so that the integral of 1 is 2. `f` is called as f(theta, phi). The spec's
/// panels and order apply to both axes; split points are not used.
template <class F>
auto sphere_integrate(F&& f, const QuadSpec& spec)
    -> std::decay_t<std::invoke_result_t<F&, double, double>> {
  using T = std::decay_t<std::invoke_result_t<F&, double, double>>;
  const auto& rule = gauss_legendre_rule(spec.order);
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  QuadSpec axis = spec;
  axis.split_points.clear();
  (void)detail::segment_bounds(0.0, std::numbers::pi, axis);

  const double pi = std::numbers::pi;
  const double theta_width = pi / spec.panels;
  const double phi_width = 2.0 * pi / spec.panels;

  // Precompute the phi abscissae and weights once.
  std::vector<double> phis;
  std::vector<double> phi_weights;
  phis.reserve(static_cast<std::size_t>(spec.panels) * nodes.size());
  phi_weights.reserve(phis.capacity());
  for (int p = 0; p < spec.panels; ++p) {
    const double mid = (p + 0.5) * phi_width;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      phis.push_back(mid + 0.5 * phi_width * nodes[i]);
      phi_weights.push_back(0.5 * phi_width * weights[i]);
    }
  }

  T total{};
  for (int p = 0; p < spec.panels; ++p) {
    const double mid = (p + 0.5) * theta_width;
    T panel{};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double theta = mid + 0.5 * theta_width * nodes[i];
      T ring{};
      for (std::size_t j = 0; j < phis.size(); ++j) {
        const T v = f(theta, phis[j]);
        if (!detail::finite(v)) detail::throw_non_finite(theta, phis[j]);
        detail::accumulate(ring, phi_weights[j], v);
      }
      detail::accumulate(panel, weights[i] * std::sin(theta), ring);
    }
    detail::accumulate(total, 0.5 * theta_width / (2.0 * pi), panel);
  }
  return total;
}

}  // namespace qbound
