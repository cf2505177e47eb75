#pragma once

// Continuous-outcome POVMs for estimating the azimuth phi.
//
// A family Pi(phi_hat; p) has elements
//
//   [[ x11,             x12 + i y12 ],
//    [ x12 - i y12,     x11         ]]
//
// on the outcome window [mu - pi, mu + pi] with centre mu = p + eps. The
// parameter p is the construction azimuth; derivatives "with respect to the
// parameter" are d/dp at fixed phi_hat. Families may jump at finitely many
// points (the sharp family jumps at mu); those are reported so integrals can
// split there and so the singular part of d/dp can be accounted for.

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "qbound/linalg.hpp"
#include "qbound/quadrature.hpp"
#include "qbound/qubit.hpp"

namespace qbound {

struct PovmElements {
  double x11 = 0.0;
  double x12 = 0.0;
  double y12 = 0.0;

  /// The element as an operator: x11 I + x12 X - y12 Y.
  HermitianOp2 op() const { return HermitianOp2::from_pauli(x11, x12, -y12, 0.0); }
};

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  /// Exact centre when known; otherwise the midpoint of [lo, hi] is used.
  double mid = std::numeric_limits<double>::quiet_NaN();

  double centre() const { return std::isnan(mid) ? 0.5 * (lo + hi) : mid; }
  double width() const { return hi - lo; }
};

/// A jump of the elements at `location` (right limit minus left limit); the
/// location moves with the parameter at rate `velocity`.
struct Discontinuity {
  double location = 0.0;
  double velocity = 0.0;
  PovmElements jump;
};

struct EstimationContext {
  QubitState state;
  double eps = 0.0;
  double construct_phi;  ///< parameter p at which the family is built

  /// Context with construct_phi = state.phi().
  explicit EstimationContext(const QubitState& s, double eps_ = 0.0)
      : state(s), eps(eps_), construct_phi(s.phi()) {}
  EstimationContext(const QubitState& s, double eps_, double construct)
      : state(s), eps(eps_), construct_phi(construct) {}
};

class PovmFamily {
 public:
  using ElementFn = std::function<PovmElements(double phi_hat, double param)>;
  using WindowFn = std::function<Window(double param)>;
  using DiscontinuityFn = std::function<std::vector<Discontinuity>(double param)>;
  using BreakpointFn = std::function<std::vector<double>(double param)>;

  struct Parts {
    std::string name;
    ElementFn elements;
    ElementFn param_derivative;   ///< pointwise d/dp away from discontinuities
    WindowFn window;
    Window window_velocity;       ///< (d lo/dp, d hi/dp)
    DiscontinuityFn discontinuities;
    BreakpointFn kinks;           ///< optional: points where elements are only continuous
  };

  explicit PovmFamily(Parts parts);

  const std::string& name() const { return parts_.name; }
  PovmElements elements(double phi_hat, double param) const {
    return parts_.elements(phi_hat, param);
  }
  PovmElements param_derivative(double phi_hat, double param) const {
    return parts_.param_derivative(phi_hat, param);
  }
  Window window(double param) const { return parts_.window(param); }
  Window window_velocity() const { return parts_.window_velocity; }
  std::vector<Discontinuity> discontinuities(double param) const;

  /// Sorted interior points where integrands built from this family must be split.
  std::vector<double> breakpoints(double param) const;

  /// `spec` with this family's breakpoints at `param` as split points.
  QuadSpec split_spec(const QuadSpec& spec, double param) const;

 private:
  Parts parts_;
};

/// Symmetric outcome profile w(u), u = phi_hat - mu, with its derivative.
struct Profile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

/// Gaussian of width sigma truncated to [-pi, pi] and normalised there.
Profile truncated_gaussian_profile(double sigma);

/// x11 = w(u), x12 = coupling sin(p) w(u) sgn(-u), y12 = coupling cos(p) w(u) sgn(-u),
/// with sgn(0) = 0. coupling = 1 saturates positivity (lambda_1 = 0).
PovmFamily sharp_profile_family(Profile profile, double coupling, const EstimationContext& ctx,
                                std::string name);

/// The saturating Gaussian family. Throws ConstructionError when cos(construct_phi) = 0.
PovmFamily gaussian_sharp_family(double sigma, const EstimationContext& ctx);

/// A parameter-independent family from tabulated (phi_hat, x11, x12, y12)
/// rows, linear between rows. phi_hat must be strictly increasing; the window
/// is [first, last].
struct TableRow {
  double phi_hat;
  double x11;
  double x12;
  double y12;
};
PovmFamily tabulated_family(std::vector<TableRow> rows, std::string name = "tabulated");

/// Reads the CSV import format: header `phi_hat,x11,x12,y12`, one row per line.
std::vector<TableRow> read_povm_csv(std::istream& in);
void write_povm_csv(std::ostream& out, const std::vector<TableRow>& rows);

/// Samples a family at `count` equally spaced outcomes across its window.
std::vector<TableRow> tabulate(const PovmFamily& family, double param, std::size_t count);

struct ValidationTolerances {
  double completeness = 1e-9;
  double positivity = 1e-12;
  double symmetry = 1e-9;
  double zero_mean = 1e-9;
  double unbiasedness = 1e-8;
};

struct ValidationReport {
  double completeness_residual = 0.0;  ///< |int x11 - 1|
  double x12_mean_residual = 0.0;      ///< |int x12|
  double y12_mean_residual = 0.0;      ///< |int y12|
  double min_eigenvalue = 0.0;         ///< min over scanned outcomes of lambda_1
  double max_lambda1 = 0.0;            ///< max over scanned outcomes of |lambda_1|
  double symmetry_residual = 0.0;      ///< max |x11(mu+u) - x11(mu-u)|
  double unbiasedness_residual = 0.0;  ///< |int (phi_hat - (phi+eps)) q|
  bool sign_conditions = false;        ///< y12/cos(phi) has sign sgn(mu - phi_hat)
  bool complete = false;
  bool positive = false;
  bool symmetric = false;
  bool zero_mean = false;
  bool unbiased = false;
  std::vector<std::string> flags;  ///< one message per failed check

  bool ok() const { return flags.empty(); }
};

ValidationReport validate_povm(const PovmFamily& family, const EstimationContext& ctx,
                               const QuadSpec& spec = {},
                               const ValidationTolerances& tol = {});

/// q(phi_hat) = tr[rho Pi(phi_hat; p)] over the family's window.
class OutcomeDensity {
 public:
  OutcomeDensity(QubitState state, PovmFamily family, double param);

  double operator()(double phi_hat) const;
  Window window() const { return window_; }
  const std::vector<double>& split_points() const { return splits_; }
  QuadSpec split_spec(const QuadSpec& spec) const { return spec.with_split_points(splits_); }

 private:
  HermitianOp2 rho_;
  PovmFamily family_;
  double param_;
  Window window_;
  std::vector<double> splits_;
};

/// Builds q and checks it for negativity on the quadrature nodes of `spec`;
/// throws ValidationError naming the offending outcome.
OutcomeDensity outcome_distribution(const EstimationContext& ctx, const PovmFamily& family,
                                    const QuadSpec& spec = {});

struct EstimatorMoments {
  double mean = 0.0;      ///< int phi_hat q
  double variance = 0.0;  ///< int (phi_hat - phi)^2 q, about the true phi
};

EstimatorMoments estimator_moments(const EstimationContext& ctx, const PovmFamily& family,
                                   const QuadSpec& spec = {});

/// Inverse-CDF sampler on a tabulated cumulative grid, linear between nodes.
class InverseCdfSampler {
 public:
  static constexpr std::size_t kMinNodes = 4096;

  explicit InverseCdfSampler(const OutcomeDensity& q, std::size_t nodes = kMinNodes);

  double draw(std::mt19937_64& rng) const;
  std::vector<double> sample(std::size_t n, std::mt19937_64& rng) const;

  const std::vector<double>& abscissae() const { return x_; }
  const std::vector<double>& cumulative() const { return cdf_; }

 private:
  std::vector<double> x_;
  std::vector<double> cdf_;  // normalised, cdf_.front() = 0, cdf_.back() = 1
};

/// n draws from q with a fresh mt19937_64 seeded by `seed`.
std::vector<double> sample_outcomes(const OutcomeDensity& q, std::size_t n, std::uint64_t seed);

/// Uniform double in [0, 1) from the top 53 bits of one engine output.
double uniform01(std::mt19937_64& rng);

}  // namespace qbound
