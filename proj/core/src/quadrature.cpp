#include "qbound/quadrature.hpp"

#include <algorithm>
#include <memory>
#include <string>

namespace qbound {

QuadSpec default_sphere_spec() {
  QuadSpec s;
  s.panels = 24;
  s.order = 16;
  return s;
}

GaussLegendreRule::GaussLegendreRule(int order) {
  if (order < 2) throw ConstructionError("Gauss-Legendre order must be >= 2");
  const auto n = static_cast<std::size_t>(order);
  nodes_.assign(n, 0.0);
  weights_.assign(n, 0.0);
  // Newton iteration on P_n from the Tricomi initial guess; symmetric pairs.
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const auto dj = static_cast<double>(j);
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * dj - 1.0) * z * p1 - (dj - 1.0) * p2) / dj;
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Re-evaluate the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      const auto dj = static_cast<double>(j);
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * dj - 1.0) * z * p1 - (dj - 1.0) * p2) / dj;
    }
    dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    nodes_[i] = -z;
    nodes_[n - 1 - i] = z;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.0;
}

const GaussLegendreRule& gauss_legendre_rule(int order) {
  static constexpr int kCached = 64;
  static const auto cache = [] {
    std::vector<std::unique_ptr<GaussLegendreRule>> rules;
    for (int n = 2; n <= kCached; ++n) rules.push_back(std::make_unique<GaussLegendreRule>(n));
    return rules;
  }();
  if (order >= 2 && order <= kCached) return *cache[static_cast<std::size_t>(order - 2)];
  thread_local std::unique_ptr<GaussLegendreRule> scratch;
  scratch = std::make_unique<GaussLegendreRule>(order);
  return *scratch;
}

namespace detail {

std::vector<double> segment_bounds(double a, double b, const QuadSpec& spec) {
  if (spec.panels < 1) throw ConstructionError("quadrature needs at least one panel");
  if (spec.order < 2) throw ConstructionError("quadrature order must be >= 2");
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
    std::ostringstream os;
    os << "invalid integration interval [" << a << ", " << b << "]";
    throw ConstructionError(os.str());
  }
  std::vector<double> bounds;
  bounds.reserve(spec.split_points.size() + 2);
  bounds.push_back(a);
  std::vector<double> splits = spec.split_points;
  std::sort(splits.begin(), splits.end());
  splits.erase(std::unique(splits.begin(), splits.end()), splits.end());
  for (double s : splits) {
    if (!(s > a && s < b)) {
      std::ostringstream os;
      os << "split point " << s << " not strictly inside [" << a << ", " << b << "]";
      throw ConstructionError(os.str());
    }
    bounds.push_back(s);
  }
  bounds.push_back(b);
  return bounds;
}

void throw_non_finite(double x) {
  std::ostringstream os;
  os.precision(17);
  os << "non-finite integrand value at x = " << x;
  throw QuadratureError(os.str(), x);
}

void throw_non_finite(double theta, double phi) {
  std::ostringstream os;
  os.precision(17);
  os << "non-finite integrand value at (theta, phi) = (" << theta << ", " << phi << ")";
  throw QuadratureError(os.str(), theta);
}

}  // namespace detail

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadSpec& spec) {
  return integrate(f, a, b, spec);
}

std::vector<double> quadrature_abscissae(double a, double b, const QuadSpec& spec) {
  std::vector<double> xs;
  (void)integrate(
      [&xs](double x) {
        xs.push_back(x);
        return 0.0;
      },
      a, b, spec);
  return xs;
}

}  // namespace qbound
