#include "qbound/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string_view>

#include "qbound/error.hpp"
#include "qbound/format.hpp"

namespace qbound {

namespace {

constexpr double kPi = std::numbers::pi;

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::string describe(double value, double limit) {
  return format_number(value, 6) + " exceeds " + format_number(limit, 3);
}

}  // namespace

PovmFamily::PovmFamily(Parts parts) : parts_(std::move(parts)) {
  if (!parts_.elements || !parts_.param_derivative || !parts_.window) {
    throw ConstructionError("POVM family '" + parts_.name + "' is missing element callbacks");
  }
}

std::vector<Discontinuity> PovmFamily::discontinuities(double param) const {
  return parts_.discontinuities ? parts_.discontinuities(param) : std::vector<Discontinuity>{};
}

std::vector<double> PovmFamily::breakpoints(double param) const {
  const Window w = window(param);
  std::vector<double> pts;
  for (const auto& d : discontinuities(param)) pts.push_back(d.location);
  if (parts_.kinks) {
    for (double k : parts_.kinks(param)) pts.push_back(k);
  }
  std::erase_if(pts, [&](double x) { return !(x > w.lo && x < w.hi); });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

QuadSpec PovmFamily::split_spec(const QuadSpec& spec, double param) const {
  return spec.with_split_points(breakpoints(param));
}

Profile truncated_gaussian_profile(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ConstructionError("Gaussian width sigma must be positive and finite");
  }
  const double norm = sigma * std::sqrt(2.0 * kPi) * std::erf(kPi / (sigma * std::numbers::sqrt2));
  const double two_var = 2.0 * sigma * sigma;
  return {[=](double u) { return std::exp(-u * u / two_var) / norm; },
          [=](double u) { return -(2.0 * u / two_var) * std::exp(-u * u / two_var) / norm; }};
}

PovmFamily sharp_profile_family(Profile profile, double coupling, const EstimationContext& ctx,
                                std::string name) {
  const double eps = ctx.eps;
  auto w = profile.value;
  auto dw = profile.derivative;

  PovmFamily::Parts parts;
  parts.name = std::move(name);
  parts.elements = [=](double phi_hat, double p) {
    const double u = phi_hat - (p + eps);
    const double v = w(u);
    const double s = sgn(-u);
    return PovmElements{v, coupling * std::sin(p) * v * s, coupling * std::cos(p) * v * s};
  };
  parts.param_derivative = [=](double phi_hat, double p) {
    const double u = phi_hat - (p + eps);
    const double v = w(u);
    const double dv = -dw(u);  // d/dp of w(phi_hat - p - eps)
    const double s = sgn(-u);
    const double sp = std::sin(p);
    const double cp = std::cos(p);
    return PovmElements{dv, coupling * s * (cp * v + sp * dv), coupling * s * (-sp * v + cp * dv)};
  };
  parts.window = [=](double p) { return Window{p + eps - kPi, p + eps + kPi, p + eps}; };
  parts.window_velocity = Window{1.0, 1.0, 1.0};
  parts.discontinuities = [=](double p) {
    const double w0 = w(0.0);
    // sgn(-u) steps from +1 to -1 across u = 0.
    return std::vector<Discontinuity>{
        {p + eps, 1.0, PovmElements{0.0, -2.0 * coupling * std::sin(p) * w0,
                                    -2.0 * coupling * std::cos(p) * w0}}};
  };
  return PovmFamily(std::move(parts));
}

PovmFamily gaussian_sharp_family(double sigma, const EstimationContext& ctx) {
  if (std::abs(std::cos(ctx.construct_phi)) < 1e-12) {
    throw ConstructionError("sharp family construction needs cos(phi) != 0");
  }
  return sharp_profile_family(truncated_gaussian_profile(sigma), 1.0, ctx, "gaussian-sharp");
}

PovmFamily tabulated_family(std::vector<TableRow> rows, std::string name) {
  if (rows.size() < 2) throw ConstructionError("tabulated POVM needs at least two rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!std::isfinite(r.phi_hat) || !std::isfinite(r.x11) || !std::isfinite(r.x12) ||
        !std::isfinite(r.y12)) {
      throw ConstructionError("tabulated POVM row " + std::to_string(i + 1) + " is not finite");
    }
    if (i > 0 && !(r.phi_hat > rows[i - 1].phi_hat)) {
      throw ConstructionError("tabulated POVM phi_hat must be strictly increasing (row " +
                              std::to_string(i + 1) + ")");
    }
  }
  auto table = std::make_shared<const std::vector<TableRow>>(std::move(rows));
  const Window win{table->front().phi_hat, table->back().phi_hat};

  PovmFamily::Parts parts;
  parts.name = std::move(name);
  parts.elements = [table, win](double phi_hat, double) {
    if (phi_hat < win.lo || phi_hat > win.hi) return PovmElements{};
    const auto& t = *table;
    auto it = std::upper_bound(t.begin(), t.end(), phi_hat,
                               [](double x, const TableRow& row) { return x < row.phi_hat; });
    if (it == t.end()) return PovmElements{t.back().x11, t.back().x12, t.back().y12};
    if (it == t.begin()) ++it;
    const TableRow& a = *(it - 1);
    const TableRow& b = *it;
    const double f = (phi_hat - a.phi_hat) / (b.phi_hat - a.phi_hat);
    return PovmElements{a.x11 + f * (b.x11 - a.x11), a.x12 + f * (b.x12 - a.x12),
                        a.y12 + f * (b.y12 - a.y12)};
  };
  parts.param_derivative = [](double, double) { return PovmElements{}; };
  parts.window = [win](double) { return win; };
  parts.window_velocity = Window{0.0, 0.0, 0.0};
  parts.kinks = [table](double) {
    std::vector<double> xs;
    xs.reserve(table->size());
    for (std::size_t i = 1; i + 1 < table->size(); ++i) xs.push_back((*table)[i].phi_hat);
    return xs;
  };
  return PovmFamily(std::move(parts));
}

std::vector<TableRow> read_povm_csv(std::istream& in) {
  std::vector<TableRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!header_seen) {
      std::string joined;
      for (auto c : cells) {
        while (!c.empty() && c.front() == ' ') c.remove_prefix(1);
        while (!c.empty() && c.back() == ' ') c.remove_suffix(1);
        joined += std::string(c) + ",";
      }
      if (joined != "phi_hat,x11,x12,y12,") {
        throw ConstructionError("POVM CSV header must be 'phi_hat,x11,x12,y12' (line " +
                                std::to_string(line_no) + ")");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 4) {
      throw ConstructionError("POVM CSV line " + std::to_string(line_no) + " has " +
                              std::to_string(cells.size()) + " columns, expected 4");
    }
    try {
      rows.push_back({parse_number(cells[0]), parse_number(cells[1]), parse_number(cells[2]),
                      parse_number(cells[3])});
    } catch (const ConstructionError& e) {
      throw ConstructionError("POVM CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw ConstructionError("POVM CSV is empty");
  return rows;
}

void write_povm_csv(std::ostream& out, const std::vector<TableRow>& rows) {
  out << "phi_hat,x11,x12,y12\n";
  for (const auto& r : rows) {
    out << format_roundtrip(r.phi_hat) << ',' << format_roundtrip(r.x11) << ','
        << format_roundtrip(r.x12) << ',' << format_roundtrip(r.y12) << '\n';
  }
}

std::vector<TableRow> tabulate(const PovmFamily& family, double param, std::size_t count) {
  if (count < 2) throw ConstructionError("tabulate needs at least two rows");
  const Window w = family.window(param);
  std::vector<TableRow> rows;
  rows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = w.lo + w.width() * static_cast<double>(i) / static_cast<double>(count - 1);
    const PovmElements e = family.elements(x, param);
    rows.push_back({x, e.x11, e.x12, e.y12});
  }
  return rows;
}

ValidationReport validate_povm(const PovmFamily& family, const EstimationContext& ctx,
                               const QuadSpec& spec, const ValidationTolerances& tol) {
  const double p = ctx.construct_phi;
  const Window win = family.window(p);
  const QuadSpec qs = family.split_spec(spec, p);
  const HermitianOp2 rho = density_matrix(ctx.state);
  const double target = ctx.state.phi() + ctx.eps;

  const auto sums = integrate(
      [&](double x) {
        const PovmElements e = family.elements(x, p);
        return std::array<double, 4>{e.x11, e.x12, e.y12,
                                     (x - target) * trace_product(rho, e.op())};
      },
      win.lo, win.hi, qs);

  ValidationReport rep;
  rep.completeness_residual = std::abs(sums[0] - 1.0);
  rep.x12_mean_residual = std::abs(sums[1]);
  rep.y12_mean_residual = std::abs(sums[2]);
  rep.unbiasedness_residual = std::abs(sums[3]);

  const double centre = win.centre();
  const double cphi = std::cos(ctx.state.phi());
  bool signs_ok = std::abs(cphi) >= 1e-12;
  double min_l1 = std::numeric_limits<double>::infinity();
  double max_l1 = 0.0;
  double sym = 0.0;
  for (double x : quadrature_abscissae(win.lo, win.hi, qs)) {
    const PovmElements e = family.elements(x, p);
    const double l1 = e.x11 - std::hypot(e.x12, e.y12);
    min_l1 = std::min(min_l1, l1);
    max_l1 = std::max(max_l1, std::abs(l1));
    const double mirror = 2.0 * centre - x;
    sym = std::max(sym, std::abs(e.x11 - family.elements(mirror, p).x11));
    if (signs_ok && !(e.y12 / cphi * sgn(centre - x) > 0.0)) signs_ok = false;
  }
  if (signs_ok && std::abs(family.elements(centre, p).y12 / cphi) > tol.positivity) {
    signs_ok = false;
  }
  rep.min_eigenvalue = min_l1;
  rep.max_lambda1 = max_l1;
  rep.symmetry_residual = sym;
  rep.sign_conditions = signs_ok;

  rep.complete = rep.completeness_residual <= tol.completeness;
  rep.zero_mean = rep.x12_mean_residual <= tol.zero_mean && rep.y12_mean_residual <= tol.zero_mean;
  rep.positive = rep.min_eigenvalue >= -tol.positivity;
  rep.symmetric = rep.symmetry_residual <= tol.symmetry;
  rep.unbiased = rep.unbiasedness_residual <= tol.unbiasedness;

  if (!rep.complete) {
    rep.flags.push_back("completeness residual " + describe(rep.completeness_residual, tol.completeness));
  }
  if (!rep.zero_mean) {
    rep.flags.push_back("off-diagonal mean residual " +
                        describe(std::max(rep.x12_mean_residual, rep.y12_mean_residual), tol.zero_mean));
  }
  if (!rep.positive) {
    rep.flags.push_back("negative eigenvalue " + format_number(rep.min_eigenvalue, 6));
  }
  if (!rep.symmetric) {
    rep.flags.push_back("x11 symmetry residual " + describe(rep.symmetry_residual, tol.symmetry));
  }
  if (!rep.unbiased) {
    rep.flags.push_back("unbiasedness residual " + describe(rep.unbiasedness_residual, tol.unbiasedness));
  }
  return rep;
}

OutcomeDensity::OutcomeDensity(QubitState state, PovmFamily family, double param)
    : rho_(density_matrix(state)),
      family_(std::move(family)),
      param_(param),
      window_(family_.window(param)),
      splits_(family_.breakpoints(param)) {}

double OutcomeDensity::operator()(double phi_hat) const {
  return trace_product(rho_, family_.elements(phi_hat, param_).op());
}

OutcomeDensity outcome_distribution(const EstimationContext& ctx, const PovmFamily& family,
                                    const QuadSpec& spec) {
  OutcomeDensity q(ctx.state, family, ctx.construct_phi);
  const Window w = q.window();
  for (double x : quadrature_abscissae(w.lo, w.hi, q.split_spec(spec))) {
    const double v = q(x);
    if (v < -1e-12) {
      std::ostringstream os;
      os.precision(12);
      os << "outcome density is negative (" << v << ") at phi_hat = " << x;
      throw ValidationError(os.str());
    }
  }
  return q;
}

EstimatorMoments estimator_moments(const EstimationContext& ctx, const PovmFamily& family,
                                   const QuadSpec& spec) {
  const OutcomeDensity q = outcome_distribution(ctx, family, spec);
  const double phi = ctx.state.phi();
  const auto m = integrate(
      [&](double x) {
        const double v = q(x);
        return std::array<double, 2>{x * v, (x - phi) * (x - phi) * v};
      },
      q.window().lo, q.window().hi, q.split_spec(spec));
  return {m[0], m[1]};
}

InverseCdfSampler::InverseCdfSampler(const OutcomeDensity& q, std::size_t nodes) {
  nodes = std::max(nodes, kMinNodes);
  const Window w = q.window();
  std::vector<double> bounds{w.lo};
  for (double s : q.split_points()) bounds.push_back(s);
  bounds.push_back(w.hi);

  x_.push_back(w.lo);
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    const double share = (bounds[s + 1] - bounds[s]) / w.width();
    const auto cells = std::max<std::size_t>(2, static_cast<std::size_t>(
                                                    std::ceil(share * static_cast<double>(nodes))));
    for (std::size_t i = 1; i <= cells; ++i) {
      x_.push_back(i == cells ? bounds[s + 1]
                              : bounds[s] + (bounds[s + 1] - bounds[s]) * static_cast<double>(i) /
                                                static_cast<double>(cells));
    }
  }

  QuadSpec cell_spec;
  cell_spec.panels = 1;
  cell_spec.order = 8;
  cdf_.assign(x_.size(), 0.0);
  for (std::size_t i = 1; i < x_.size(); ++i) {
    const double mass =
        integrate([&](double x) { return std::max(q(x), 0.0); }, x_[i - 1], x_[i], cell_spec);
    cdf_[i] = cdf_[i - 1] + mass;
  }
  const double total = cdf_.back();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ValidationError("outcome density has no positive mass to sample from");
  }
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

double InverseCdfSampler::draw(std::mt19937_64& rng) const {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto i = static_cast<std::size_t>(std::distance(cdf_.begin(), it));
  if (i == 0) return x_.front();
  if (i >= cdf_.size()) return x_.back();
  const double f = (u - cdf_[i - 1]) / (cdf_[i] - cdf_[i - 1]);
  return x_[i - 1] + f * (x_[i] - x_[i - 1]);
}

std::vector<double> InverseCdfSampler::sample(std::size_t n, std::mt19937_64& rng) const {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(draw(rng));
  return out;
}

std::vector<double> sample_outcomes(const OutcomeDensity& q, std::size_t n, std::uint64_t seed) {
  if (n == 0) return {};
  std::mt19937_64 rng(seed);
  return InverseCdfSampler(q).sample(n, rng);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace qbound
