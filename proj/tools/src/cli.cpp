#include "qbound/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "qbound/error.hpp"
#include "qbound/format.hpp"
#include "qbound/metrics.hpp"
#include "qbound/selftest.hpp"

namespace qbound::cli {

namespace {

using nlohmann::ordered_json;

const char* const kParamNames[3] = {"r", "theta", "phi"};

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json matrix_json(const Matrix3& m) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : m) rows.push_back({number(row[0]), number(row[1]), number(row[2])});
  return rows;
}

std::string csv(double v) { return format_number(v, 12); }

// Output goes to `path` when given, otherwise to `fallback`.
void emit(const std::string& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  write(file);
  file.flush();
  if (!file) throw IoError("write to '" + path + "' failed");
}

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::string underscored(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (format == a) return;
  throw ConstructionError("unsupported --format '" + format + "'");
}

// --- subcommand bodies -----------------------------------------------------

int do_metrics(const RunConfig& cfg, std::ostream& out) {
  const QubitState state(cfg.r, cfg.theta, cfg.phi);
  const MetricReport rep = metric_report(state);
  std::optional<double> fisher;
  if (std::abs(std::cos(cfg.phi)) >= 1e-12) {
    const EstimationContext ctx(state, cfg.eps);
    fisher = measurement_fisher(ctx, gaussian_sharp_family(cfg.sigma, ctx), cfg.quad());
  }
  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  require_format(format, {"csv", "json"});

  emit(cfg.out, out, [&](std::ostream& os) {
    const std::pair<const char*, const Matrix3*> mats[] = {
        {"new_metric", &rep.new_metric},
        {"sld_metric", &rep.sld_metric},
        {"rld_metric", &rep.rld_metric},
        {"husimi_classical", &rep.husimi_classical}};
    if (format == "json") {
      ordered_json j;
      j["r"] = rep.r;
      j["theta"] = rep.theta;
      j["phi"] = rep.phi;
      for (const auto& [name, m] : mats) j[name] = matrix_json(*m);
      ordered_json mono = ordered_json::object();
      for (const auto& e : rep.monotone) {
        mono[e.name] = {{"radial", number(e.coefficients.radial)},
                        {"angular", number(e.coefficients.angular)}};
      }
      j["monotone"] = mono;
      j["measurement_fisher"] = fisher ? number(*fisher) : ordered_json(nullptr);
      os << j.dump(2) << '\n';
      return;
    }
    os << "quantity,row,col,value\n";
    os << "state,r,," << csv(rep.r) << '\n';
    os << "state,theta,," << csv(rep.theta) << '\n';
    os << "state,phi,," << csv(rep.phi) << '\n';
    for (const auto& [name, m] : mats) {
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          os << name << ',' << kParamNames[i] << ',' << kParamNames[j] << ',' << csv((*m)[i][j])
             << '\n';
    }
    for (const auto& e : rep.monotone) {
      os << "monotone_" << e.name << ",radial,," << csv(e.coefficients.radial) << '\n';
      os << "monotone_" << e.name << ",angular,," << csv(e.coefficients.angular) << '\n';
    }
    if (fisher) os << "measurement_fisher,phi,phi," << csv(*fisher) << '\n';
  });
  return kOk;
}

PovmFamily load_family(const RunConfig& cfg, const EstimationContext& ctx) {
  if (cfg.povm_csv.empty()) return gaussian_sharp_family(cfg.sigma, ctx);
  std::ifstream in(cfg.povm_csv);
  if (!in) throw IoError("cannot open POVM table '" + cfg.povm_csv + "'");
  return tabulated_family(read_povm_csv(in), cfg.povm_csv);
}

int do_validate(const RunConfig& cfg, std::ostream& out) {
  const QubitState state(cfg.r, cfg.theta, cfg.phi);
  const EstimationContext ctx(state, cfg.eps);
  const PovmFamily family = load_family(cfg, ctx);
  const ValidationReport rep = validate_povm(family, ctx, cfg.quad());
  const std::string format = cfg.format.empty() ? "json" : cfg.format;
  require_format(format, {"csv", "json"});

  const std::pair<const char*, double> values[] = {
      {"completeness_residual", rep.completeness_residual},
      {"x12_mean_residual", rep.x12_mean_residual},
      {"y12_mean_residual", rep.y12_mean_residual},
      {"min_eigenvalue", rep.min_eigenvalue},
      {"max_lambda1", rep.max_lambda1},
      {"symmetry_residual", rep.symmetry_residual},
      {"unbiasedness_residual", rep.unbiasedness_residual}};
  const std::pair<const char*, bool> flags[] = {{"sign_conditions", rep.sign_conditions},
                                                {"complete", rep.complete},
                                                {"positive", rep.positive},
                                                {"symmetric", rep.symmetric},
                                                {"zero_mean", rep.zero_mean},
                                                {"unbiased", rep.unbiased},
                                                {"ok", rep.ok()}};
  emit(cfg.out, out, [&](std::ostream& os) {
    if (format == "json") {
      ordered_json j;
      j["family"] = family.name();
      for (const auto& [k, v] : values) j[k] = number(v);
      for (const auto& [k, v] : flags) j[k] = v;
      j["flags"] = rep.flags;
      os << j.dump(2) << '\n';
      return;
    }
    os << "field,value\n";
    for (const auto& [k, v] : values) os << k << ',' << csv(v) << '\n';
    for (const auto& [k, v] : flags) os << k << ',' << (v ? "true" : "false") << '\n';
  });
  return rep.ok() ? kOk : kDomainOrValidation;
}

int do_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SweepOptions opt;
  opt.r_values = SweepOptions::grid(cfg.r_min, cfg.r_max, cfg.steps);
  opt.theta = cfg.theta;
  opt.phi = cfg.phi;
  opt.eps = cfg.eps;
  opt.sigma = cfg.sigma;
  opt.spec = cfg.quad();
  const std::vector<SweepRow> rows = bounds_sweep(opt);
  emit(cfg.out, out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
  if (!cfg.svg.empty()) {
    emit(cfg.svg, out, [&](std::ostream& os) { write_sweep_svg(os, rows, cfg.log_y); });
  }
  int status = kOk;
  for (const auto& row : rows) {
    if (!row.ok) {
      err << "row r = " << csv(row.r) << " failed: " << row.error << '\n';
      status = kDomainOrValidation;
    }
  }
  return status;
}

int do_audit(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.format.empty()) require_format(cfg.format, {"json"});
  const QubitState state(cfg.r, cfg.theta, cfg.phi);
  const EstimationContext ctx(state, cfg.eps);
  const PovmFamily family = load_family(cfg, ctx);
  const AuditReport rep = audit_derivation({ctx, family}, cfg.quad());
  ordered_json j;
  j["family"] = family.name();
  j["r"] = cfg.r;
  j["theta"] = cfg.theta;
  j["phi"] = cfg.phi;
  j["eps"] = cfg.eps;
  const std::pair<const char*, double> fields[] = {
      {"identity_lhs", rep.identity_lhs},
      {"a_plus_b", rep.a_plus_b},
      {"residual_eq72", rep.residual_eq72},
      {"boundary_term", rep.boundary_term},
      {"boundary_mismatch", rep.boundary_mismatch},
      {"re_trace", rep.re_trace},
      {"bracket_real", rep.bracket_real},
      {"bracket_real_residual", rep.bracket_real_residual},
      {"imag_residual", rep.imag_residual},
      {"schwarz_lhs", rep.schwarz_lhs},
      {"schwarz_mid", rep.schwarz_mid},
      {"schwarz_rhs", rep.schwarz_rhs},
      {"schwarz_slack", rep.schwarz_slack},
      {"bracket_slack", rep.bracket_slack},
      {"trace_TL_Pi_TL", rep.trace_TL_Pi_TL},
      {"zgz", rep.zgz},
      {"zgz_residual", rep.zgz_residual}};
  for (const auto& [k, v] : fields) j[k] = number(v);
  emit(cfg.out, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return kOk;
}

std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("QBOUND_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t v = 0;
    const std::string_view text(env);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
      throw ConstructionError("QBOUND_SEED is not an unsigned integer: '" + std::string(text) + "'");
    }
    return v;
  }
  return 1;
}

int do_simulate(const RunConfig& cfg, std::ostream& out) {
  const QubitState state(cfg.r, cfg.theta, cfg.phi);
  const EstimationContext ctx(state, cfg.eps);
  const PovmFamily family = load_family(cfg, ctx);
  const QuadSpec spec = cfg.quad();
  const OutcomeDensity q = outcome_distribution(ctx, family, spec);
  const EstimatorMoments exact = estimator_moments(ctx, family, spec);
  const std::uint64_t seed = resolve_seed(cfg);
  const std::vector<double> xs = sample_outcomes(q, cfg.samples, seed);

  const auto n = static_cast<double>(xs.size());
  double mean = 0.0;
  double msd = 0.0;
  for (double x : xs) {
    mean += x;
    msd += (x - cfg.phi) * (x - cfg.phi);
  }
  double var_mean = std::nan("");
  double var_msd = std::nan("");
  if (!xs.empty()) {
    mean /= n;
    msd /= n;
  } else {
    mean = msd = std::nan("");
  }
  if (xs.size() > 1) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (double x : xs) {
      const double d2 = (x - cfg.phi) * (x - cfg.phi);
      s1 += (x - mean) * (x - mean);
      s2 += (d2 - msd) * (d2 - msd);
    }
    var_mean = s1 / (n - 1.0);
    var_msd = s2 / (n - 1.0);
  }
  const double se_mean = std::sqrt(var_mean / n);
  const double se_var = std::sqrt(var_msd / n);

  const std::pair<const char*, double> fields[] = {
      {"samples", n},
      {"seed", static_cast<double>(seed)},
      {"empirical_mean", mean},
      {"mean_stderr", se_mean},
      {"true_mean", cfg.phi + cfg.eps},
      {"quadrature_mean", exact.mean},
      {"mean_z", (mean - (cfg.phi + cfg.eps)) / se_mean},
      {"empirical_variance", msd},
      {"variance_stderr", se_var},
      {"quadrature_variance", exact.variance},
      {"variance_z", (msd - exact.variance) / se_var}};
  const std::string format = cfg.format.empty() ? "json" : cfg.format;
  require_format(format, {"csv", "json"});
  emit(cfg.out, out, [&](std::ostream& os) {
    if (format == "json") {
      ordered_json j;
      j["family"] = family.name();
      for (const auto& [k, v] : fields) {
        if (std::string_view(k) == "samples") {
          j[k] = xs.size();
        } else if (std::string_view(k) == "seed") {
          j[k] = seed;
        } else {
          j[k] = number(v);
        }
      }
      os << j.dump(2) << '\n';
      return;
    }
    os << "field,value\n";
    os << "samples," << xs.size() << '\n';
    os << "seed," << seed << '\n';
    for (const auto& [k, v] : fields) {
      const std::string_view key(k);
      if (key == "samples" || key == "seed") continue;
      os << k << ',' << csv(v) << '\n';
    }
  });
  return kOk;
}

int do_selftest(const RunConfig& cfg, std::ostream& out) {
  const std::vector<CheckResult> checks = run_selftest();
  bool all = true;
  emit(cfg.out, out, [&](std::ostream& os) {
    for (const auto& c : checks) {
      os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
      all = all && c.passed;
    }
    os << (all ? "selftest passed" : "selftest FAILED") << '\n';
  });
  return all ? kOk : kSelftestFailed;
}

// --- argument plumbing -----------------------------------------------------

struct Subcommands {
  CLI::App* metrics;
  CLI::App* povm;
  CLI::App* validate;
  CLI::App* bounds;
  CLI::App* sweep;
  CLI::App* audit;
  CLI::App* simulate;
  CLI::App* selftest;
};

void add_state(CLI::App* app, RunConfig& cfg) {
  app->add_option("--r", cfg.r, "Bloch radius in [0, 1]")->capture_default_str();
  app->add_option("--theta", cfg.theta, "polar angle (radians)")->capture_default_str();
  app->add_option("--phi", cfg.phi, "azimuth (radians)")->capture_default_str();
  app->add_option("--eps", cfg.eps, "construction offset epsilon (radians)")->capture_default_str();
  app->add_option("--sigma", cfg.sigma, "Gaussian width of the sharp family")->capture_default_str();
}

void add_quad(CLI::App* app, RunConfig& cfg) {
  app->add_option("--panels", cfg.panels, "quadrature panels per segment")->capture_default_str();
  app->add_option("--order", cfg.order, "Gauss-Legendre nodes per panel")->capture_default_str();
}

void add_output(CLI::App* app, RunConfig& cfg, bool with_format) {
  app->add_option("--out", cfg.out, "output file (default: standard output)");
  if (with_format) app->add_option("--format", cfg.format, "csv or json");
}

Subcommands build(CLI::App& app, RunConfig& cfg) {
  Subcommands s{};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", "key=value configuration file; command-line flags take precedence");

  s.metrics = app.add_subcommand("metrics", "metric tensors at a state point");
  add_state(s.metrics, cfg);
  add_quad(s.metrics, cfg);
  add_output(s.metrics, cfg, true);

  s.povm = app.add_subcommand("povm", "POVM utilities");
  s.povm->require_subcommand(1);
  s.validate = s.povm->add_subcommand("validate", "validate a POVM family");
  add_state(s.validate, cfg);
  add_quad(s.validate, cfg);
  add_output(s.validate, cfg, true);
  s.validate->add_option("--povm-csv", cfg.povm_csv, "tabulated family (phi_hat,x11,x12,y12)");

  s.bounds = app.add_subcommand("bounds", "variance bounds");
  s.bounds->require_subcommand(1);
  s.sweep = s.bounds->add_subcommand("sweep", "bound comparison over a radius grid");
  add_state(s.sweep, cfg);
  add_quad(s.sweep, cfg);
  add_output(s.sweep, cfg, false);
  s.sweep->add_option("--r-min", cfg.r_min, "first radius")->capture_default_str();
  s.sweep->add_option("--r-max", cfg.r_max, "last radius")->capture_default_str();
  s.sweep->add_option("--steps", cfg.steps, "number of radii")->capture_default_str();
  s.sweep->add_option("--svg", cfg.svg, "also write an SVG chart to this file");
  s.sweep->add_flag("--log-y", cfg.log_y, "logarithmic y axis in the chart");

  s.audit = app.add_subcommand("audit", "numerical audit of the bound derivation");
  add_state(s.audit, cfg);
  add_quad(s.audit, cfg);
  add_output(s.audit, cfg, true);
  s.audit->add_option("--povm-csv", cfg.povm_csv, "tabulated family (phi_hat,x11,x12,y12)");

  s.simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the estimator moments");
  add_state(s.simulate, cfg);
  add_quad(s.simulate, cfg);
  add_output(s.simulate, cfg, true);
  s.simulate->add_option("--povm-csv", cfg.povm_csv, "tabulated family (phi_hat,x11,x12,y12)");
  s.simulate->add_option("--samples", cfg.samples, "number of draws")->capture_default_str();
  s.simulate->add_option("--seed", cfg.seed, "RNG seed (fallback: QBOUND_SEED, then 1)");

  s.selftest = app.add_subcommand("selftest", "run the cross-check suite");
  add_output(s.selftest, cfg, false);
  return s;
}

// Leading subcommand tokens of `args`, e.g. {"bounds", "sweep"}.
std::size_t subcommand_depth(CLI::App& app, const std::vector<std::string>& args) {
  CLI::App* cur = &app;
  std::size_t depth = 0;
  for (const auto& a : args) {
    if (a.empty() || a.front() == '-') break;
    CLI::App* next = nullptr;
    for (CLI::App* sub : cur->get_subcommands([](const CLI::App*) { return true; })) {
      if (sub->get_name() == a) next = sub;
    }
    if (next == nullptr) break;
    cur = next;
    ++depth;
  }
  return depth;
}

CLI::App* leaf(CLI::App& app, const std::vector<std::string>& args, std::size_t depth) {
  CLI::App* cur = &app;
  for (std::size_t i = 0; i < depth; ++i) cur = cur->get_subcommand(args[i]);
  return cur;
}

// Splices config-file settings in front of the user's flags so the latter win.
std::vector<std::string> with_config(CLI::App& app, std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size()) throw ConstructionError("--config needs a file name");
      path = args[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      path = a.substr(9);
    } else {
      rest.push_back(a);
    }
  }
  if (path.empty()) return rest;

  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  const auto pairs = parse_config(in);

  const std::size_t depth = subcommand_depth(app, rest);
  CLI::App* target = leaf(app, rest, depth);
  std::vector<std::string> spliced(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(depth));
  for (const auto& [key, value] : pairs) {
    const std::string flag = "--" + dashed(key);
    const CLI::Option* opt = target->get_option_no_throw(flag);
    if (opt == nullptr) continue;  // valid key, not used by this subcommand
    spliced.push_back(flag + "=" + value);
  }
  spliced.insert(spliced.end(), rest.begin() + static_cast<std::ptrdiff_t>(depth), rest.end());
  return spliced;
}

std::string subcommand_path(const CLI::App& app) {
  std::string path;
  const CLI::App* cur = &app;
  while (true) {
    const auto subs = cur->get_subcommands();
    if (subs.empty()) break;
    cur = subs.front();
    if (!path.empty()) path += ' ';
    path += cur->get_name();
  }
  return path;
}

}  // namespace

QuadSpec RunConfig::quad() const {
  QuadSpec q;
  q.panels = panels;
  q.order = order;
  return q;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "r",     "theta",   "phi",  "eps",    "sigma",  "r_min",  "r_max", "steps", "samples",
      "seed",  "out",     "svg",  "format", "log_y",  "panels", "order", "povm_csv"};
  return keys;
}

std::vector<std::pair<std::string, std::string>> parse_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_no = 0;
  const auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string{};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConstructionError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = underscored(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConstructionError("config line " + std::to_string(line_no) + ": unknown key '" + key +
                              "'");
    }
    pairs.emplace_back(key, value);
  }
  return pairs;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "r,B_max,B_SLD,B_RLD,B_Fisher,B_Husimi,v,vg_minus_C\n";
  for (const auto& row : rows) {
    const auto cell = [&](double v) { return row.ok ? csv(v) : std::string("nan"); };
    out << csv(row.r) << ',' << cell(row.B_max) << ',' << cell(row.B_SLD) << ','
        << cell(row.B_RLD) << ',' << cell(row.B_Fisher) << ',' << cell(row.B_Husimi) << ','
        << cell(row.v) << ',' << cell(row.vg_minus_C) << '\n';
  }
}

void write_sweep_svg(std::ostream& out, const std::vector<SweepRow>& rows, bool log_y) {
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 420.0;
  constexpr double kLeft = 70.0;
  constexpr double kRight = 150.0;
  constexpr double kTop = 30.0;
  constexpr double kBottom = 50.0;
  struct Series {
    const char* name;
    double SweepRow::*field;
    const char* colour;
  };
  const Series series[] = {{"B_max", &SweepRow::B_max, "#d62728"},
                           {"B_Fisher", &SweepRow::B_Fisher, "#2ca02c"},
                           {"B_SLD", &SweepRow::B_SLD, "#1f77b4"},
                           {"B_RLD", &SweepRow::B_RLD, "#9467bd"},
                           {"B_Husimi", &SweepRow::B_Husimi, "#7f7f7f"}};

  const auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& row : rows) {
    if (!row.ok) continue;
    xmin = std::min(xmin, row.r);
    xmax = std::max(xmax, row.r);
    for (const auto& s : series) {
      const double v = row.*(s.field);
      if (!std::isfinite(v) || (log_y && v <= 0.0)) continue;
      ymin = std::min(ymin, ty(v));
      ymax = std::max(ymax, ty(v));
    }
  }
  if (!(xmin < xmax)) {
    xmin = std::isfinite(xmin) ? xmin - 0.5 : 0.0;
    xmax = xmin + 1.0;
  }
  if (!(ymin < ymax)) {
    ymin = std::isfinite(ymin) ? ymin - 1.0 : 0.0;
    ymax = ymin + 2.0;
  }
  if (!log_y) ymin = std::min(ymin, 0.0);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };
  const auto f = [](double v) { return format_number(v, 6); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f(kWidth) << "\" height=\""
      << f(kHeight) << "\" viewBox=\"0 0 " << f(kWidth) << ' ' << f(kHeight) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<line x1=\"" << f(kLeft) << "\" y1=\"" << f(kTop + ph) << "\" x2=\"" << f(kLeft + pw)
      << "\" y2=\"" << f(kTop + ph) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << f(kLeft) << "\" y1=\"" << f(kTop) << "\" x2=\"" << f(kLeft)
      << "\" y2=\"" << f(kTop + ph) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    out << "<text x=\"" << f(px(xv)) << "\" y=\"" << f(kTop + ph + 18) << "\" text-anchor=\"middle\">"
        << f(xv) << "</text>\n";
    out << "<text x=\"" << f(kLeft - 6) << "\" y=\"" << f(py(yv) + 4) << "\" text-anchor=\"end\">"
        << f(log_y ? std::pow(10.0, yv) : yv) << "</text>\n";
  }
  out << "<text x=\"" << f(kLeft + pw / 2) << "\" y=\"" << f(kHeight - 10)
      << "\" text-anchor=\"middle\">r</text>\n";
  out << "<text x=\"16\" y=\"" << f(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << f(kTop + ph / 2) << ")\">variance bound" << (log_y ? " (log scale)" : "") << "</text>\n";

  int k = 0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.colour << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto& row : rows) {
      const double v = row.*(s.field);
      if (!row.ok || !std::isfinite(v) || (log_y && v <= 0.0)) continue;
      out << (first ? "" : " ") << f(px(row.r)) << ',' << f(py(ty(v)));
      first = false;
    }
    out << "\"/>\n";
    const double ly = kTop + 10 + 18 * k;
    out << "<line x1=\"" << f(kLeft + pw + 12) << "\" y1=\"" << f(ly) << "\" x2=\""
        << f(kLeft + pw + 36) << "\" y2=\"" << f(ly) << "\" stroke=\"" << s.colour
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << f(kLeft + pw + 42) << "\" y=\"" << f(ly + 4) << "\">" << s.name
        << "</text>\n";
    ++k;
  }
  out << "</g>\n</svg>\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"qbound: qubit phase-space metrics and variance bounds", "qbound"};
  const Subcommands s = build(app, cfg);

  try {
    std::vector<std::string> argv_store = with_config(app, args);
    std::vector<const char*> argv{"qbound"};
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kOk;
    } catch (const CLI::ParseError& e) {
      err << "qbound: " << e.what() << '\n';
      return kDomainOrValidation;
    }
    cfg.subcommand = subcommand_path(app);

    if (s.metrics->parsed()) return do_metrics(cfg, out);
    if (s.validate->parsed()) return do_validate(cfg, out);
    if (s.sweep->parsed()) return do_sweep(cfg, out, err);
    if (s.audit->parsed()) return do_audit(cfg, out);
    if (s.simulate->parsed()) return do_simulate(cfg, out);
    if (s.selftest->parsed()) return do_selftest(cfg, out);
    err << "qbound: no subcommand\n";
    return kDomainOrValidation;
  } catch (const IoError& e) {
    err << "qbound: I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const DomainError& e) {
    err << "qbound: domain error: " << e.what() << '\n';
    return kDomainOrValidation;
  } catch (const ValidationError& e) {
    err << "qbound: validation error: " << e.what() << '\n';
    return kDomainOrValidation;
  } catch (const ConstructionError& e) {
    err << "qbound: invalid input: " << e.what() << '\n';
    return kDomainOrValidation;
  } catch (const QuadratureError& e) {
    err << "qbound: quadrature error: " << e.what() << '\n';
    return kDomainOrValidation;
  }
}

}  // namespace qbound::cli
