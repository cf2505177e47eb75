#pragma once

// Extra POVM families used by tests: boundary-vanishing perturbations of the
// sharp family and deliberately broken variants.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qbound/measurement.hpp"
#include "qbound/quadrature.hpp"

namespace testing_support {

using namespace qbound;

struct PerturbationParams {
  double sigma;
  double alpha;     // |alpha| < 1
  double coupling;  // in [0.5, 1]
};

/// w(u) = N (g(u) - g(pi)) (1 + alpha cos 2u), g(u) = exp(-u^2 / (2 sigma^2)).
/// Vanishes at the window edges.
inline Profile vanishing_profile(double sigma, double alpha) {
  const double s2 = sigma * sigma;
  const auto g = [s2](double u) { return std::exp(-u * u / (2.0 * s2)); };
  const double g_pi = g(std::numbers::pi);
  const auto raw = [=](double u) { return (g(u) - g_pi) * (1.0 + alpha * std::cos(2.0 * u)); };
  QuadSpec spec;
  spec.panels = 128;
  const double norm = 1.0 / integrate(raw, -std::numbers::pi, std::numbers::pi, spec);
  return {[=](double u) { return norm * raw(u); },
          [=](double u) {
            const double dg = -u / s2 * g(u);
            return norm * (dg * (1.0 + alpha * std::cos(2.0 * u)) -
                           (g(u) - g_pi) * 2.0 * alpha * std::sin(2.0 * u));
          }};
}

inline PovmFamily perturbed_family(const PerturbationParams& p, const EstimationContext& ctx) {
  return sharp_profile_family(vanishing_profile(p.sigma, p.alpha), p.coupling, ctx,
                              "vanishing-perturbation");
}

/// Three seeded draws of perturbation parameters.
inline std::vector<PerturbationParams> seeded_perturbations(std::uint64_t seed = 20261016) {
  std::mt19937_64 rng(seed);
  std::vector<PerturbationParams> out;
  for (int i = 0; i < 3; ++i) {
    const double sigma = 1.5 + 2.0 * uniform01(rng);
    const double alpha = -0.6 + 1.2 * uniform01(rng);
    const double coupling = 0.5 + 0.5 * uniform01(rng);
    out.push_back({sigma, alpha, coupling});
  }
  return out;
}

/// Sharp family with x11 scaled by `scale` (not normalised unless scale = 1).
inline PovmFamily scaled_family(double scale, const EstimationContext& ctx) {
  Profile base = truncated_gaussian_profile(3.0);
  Profile scaled{[=](double u) { return scale * base.value(u); },
                 [=](double u) { return scale * base.derivative(u); }};
  return sharp_profile_family(scaled, 1.0, ctx, "scaled");
}

/// Sharp family with the off-diagonal sign pattern reversed.
inline PovmFamily reversed_sign_family(const EstimationContext& ctx) {
  return sharp_profile_family(truncated_gaussian_profile(3.0), -1.0, ctx, "reversed");
}

/// Diagonal, parameter-independent family: x11 = truncated Gaussian about `centre`.
inline PovmFamily fixed_diagonal_family(double centre, double sigma = 3.0) {
  const Profile prof = truncated_gaussian_profile(sigma);
  PovmFamily::Parts parts;
  parts.name = "fixed-diagonal";
  parts.elements = [=](double x, double) { return PovmElements{prof.value(x - centre), 0.0, 0.0}; };
  parts.param_derivative = [](double, double) { return PovmElements{}; };
  parts.window = [=](double) {
    return Window{centre - std::numbers::pi, centre + std::numbers::pi, centre};
  };
  parts.window_velocity = Window{0.0, 0.0, 0.0};
  return PovmFamily(std::move(parts));
}

}  // namespace testing_support
