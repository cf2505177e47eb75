#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbound/cli.hpp"
#include "qbound/error.hpp"
#include "qbound/measurement.hpp"

namespace fs = std::filesystem;
using qbound::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("qbound-test-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "-" +
             std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

struct SeedEnv {
  explicit SeedEnv(const char* value) {
    if (value) {
      ::setenv("QBOUND_SEED", value, 1);
    } else {
      ::unsetenv("QBOUND_SEED");
    }
  }
  ~SeedEnv() { ::unsetenv("QBOUND_SEED"); }
};

}  // namespace

TEST_CASE("metrics") {
  SUBCASE("csv default") {
    const Result r = invoke({"metrics", "--r", "0.5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("new_metric") != std::string::npos);
  }
  SUBCASE("json") {
    const Result r = invoke({"metrics", "--r", "0.5", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.contains("sld_metric"));
    CHECK(j["sld_metric"][2][2].get<double>() == doctest::Approx(0.25));
  }
  SUBCASE("r = 0 is a domain error") {
    const Result r = invoke({"metrics", "--r", "0", "--theta", "1", "--phi", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("domain") != std::string::npos);
  }
  SUBCASE("unknown format") {
    CHECK(invoke({"metrics", "--format", "xml"}).code == 1);
  }
}

TEST_CASE("argument errors") {
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"bogus"}).code == 1);
  CHECK(invoke({"metrics", "--no-such-flag"}).code == 1);
  CHECK(invoke({"metrics", "--r", "abc"}).code == 1);
  const Result help = invoke({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("simulate") != std::string::npos);
}

TEST_CASE("povm validate") {
  SUBCASE("built-in family") {
    const Result r = invoke({"povm", "validate"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["completeness_residual"].get<double>() <= 1e-9);
    CHECK(j["sign_conditions"].get<bool>());
  }
  SUBCASE("tabulated family from CSV") {
    TempDir dir;
    const std::string path = dir.file("povm.csv");
    write_file(path, "phi_hat,x11,x12,y12\n# flat\n-2,0.25,0,0\n0,0.25,0,0\n2,0.25,0,0\n");
    const Result r = invoke({"povm", "validate", "--povm-csv", path, "--phi", "0"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["completeness_residual"].get<double>() <= 1e-12);
  }
  SUBCASE("failing validation exits 1") {
    TempDir dir;
    const std::string path = dir.file("povm.csv");
    write_file(path, "phi_hat,x11,x12,y12\n-1,0.25,0,0\n1,0.25,0,0\n");
    CHECK(invoke({"povm", "validate", "--povm-csv", path, "--phi", "0"}).code == 1);
  }
  SUBCASE("malformed CSV exits 1, missing file exits 2") {
    TempDir dir;
    const std::string path = dir.file("bad.csv");
    write_file(path, "phi_hat,x11\n0,1\n");
    CHECK(invoke({"povm", "validate", "--povm-csv", path}).code == 1);
    CHECK(invoke({"povm", "validate", "--povm-csv", dir.file("missing.csv")}).code == 2);
  }
}

TEST_CASE("bounds sweep") {
  TempDir dir;
  const std::string csv = dir.file("fig1.csv");
  const std::string svg = dir.file("fig1.svg");
  const Result r = invoke({"bounds", "sweep", "--r-min", "0.1", "--r-max", "0.9", "--steps", "9",
                           "--theta", "1.5707963", "--phi", "2.3561945", "--eps", "0", "--out",
                           csv, "--svg", svg});
  REQUIRE(r.code == 0);
  const auto rows = lines(read_file(csv));
  REQUIRE(rows.size() == 10u);
  CHECK(rows[0] == "r,B_max,B_SLD,B_RLD,B_Fisher,B_Husimi,v,vg_minus_C");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::count(rows[i].begin(), rows[i].end(), ',') == 7);
  }
  CHECK(rows[5].rfind("0.5,", 0) == 0);
  const std::string chart = read_file(svg);
  CHECK(chart.rfind("<svg", 0) == 0);
  CHECK(chart.find("B_max") != std::string::npos);

  SUBCASE("byte-identical reruns") {
    const std::string again = dir.file("again.csv");
    REQUIRE(invoke({"bounds", "sweep", "--out", again, "--svg", dir.file("again.svg")}).code == 0);
    CHECK(read_file(again) == read_file(csv));
    CHECK(read_file(dir.file("again.svg")) == chart);
  }
  SUBCASE("log scale") {
    CHECK(invoke({"bounds", "sweep", "--steps", "3", "--log-y", "--svg", dir.file("log.svg"),
                  "--out", dir.file("log.csv")})
              .code == 0);
    CHECK(read_file(dir.file("log.svg")).find("log scale") != std::string::npos);
  }
  SUBCASE("a failed row is reported and exits 1") {
    const Result bad = invoke({"bounds", "sweep", "--r-min", "0.5", "--r-max", "1.0", "--steps", "2"});
    CHECK(bad.code == 1);
    CHECK(lines(bad.out).size() == 3u);
    CHECK_FALSE(bad.err.empty());
  }
  SUBCASE("unwritable output exits 2") {
    CHECK(invoke({"bounds", "sweep", "--steps", "1", "--out", dir.file("no/such/dir/x.csv")}).code ==
          2);
  }
}

TEST_CASE("audit") {
  const Result r = invoke({"audit"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["residual_eq72"].get<double>() == doctest::Approx(j["boundary_term"].get<double>()));
  CHECK(j["schwarz_slack"].get<double>() >= -1e-10);
}

TEST_CASE("simulate determinism and seeding") {
  const std::vector<std::string> base{"simulate", "--samples", "20000"};
  SUBCASE("same seed, same bytes") {
    SeedEnv env(nullptr);
    auto args = base;
    args.insert(args.end(), {"--seed", "42"});
    const Result a = invoke(args);
    const Result b = invoke(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["seed"].get<std::uint64_t>() == 42u);
    CHECK(std::abs(j["mean_z"].get<double>()) <= 3.0);
  }
  SUBCASE("QBOUND_SEED is the fallback") {
    auto explicit_args = base;
    explicit_args.insert(explicit_args.end(), {"--seed", "7"});
    SeedEnv env("7");
    const Result from_env = invoke(base);
    const Result from_flag = invoke(explicit_args);
    REQUIRE(from_env.code == 0);
    CHECK(from_env.out == from_flag.out);
  }
  SUBCASE("flag beats the environment") {
    SeedEnv env("7");
    auto args = base;
    args.insert(args.end(), {"--seed", "8"});
    const auto j = nlohmann::json::parse(invoke(args).out);
    CHECK(j["seed"].get<std::uint64_t>() == 8u);
  }
  SUBCASE("default seed is 1") {
    SeedEnv env(nullptr);
    const auto j = nlohmann::json::parse(invoke(base).out);
    CHECK(j["seed"].get<std::uint64_t>() == 1u);
  }
  SUBCASE("bad environment seed") {
    SeedEnv env("abc");
    CHECK(invoke(base).code == 1);
  }
  SUBCASE("csv output") {
    SeedEnv env(nullptr);
    auto args = base;
    args.insert(args.end(), {"--format", "csv"});
    const Result r = invoke(args);
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("field,value\nsamples,20000\nseed,1\n", 0) == 0);
  }
}

TEST_CASE("config files") {
  TempDir dir;
  const std::string cfg = dir.file("run.cfg");
  SUBCASE("file values apply and flags override them") {
    write_file(cfg, "# sweep settings\nsteps = 3\nr_min=0.2\nr_max=0.4\nseed=5\n");
    const Result from_file = invoke({"bounds", "sweep", "--config", cfg});
    REQUIRE(from_file.code == 0);
    const auto rows = lines(from_file.out);
    REQUIRE(rows.size() == 4u);
    CHECK(rows[1].rfind("0.2,", 0) == 0);
    CHECK(rows[3].rfind("0.4,", 0) == 0);
    const Result overridden = invoke({"bounds", "sweep", "--config", cfg, "--steps", "2"});
    REQUIRE(overridden.code == 0);
    CHECK(lines(overridden.out).size() == 3u);
  }
  SUBCASE("unknown keys are rejected") {
    write_file(cfg, "steps=3\nbogus=1\n");
    const Result r = invoke({"bounds", "sweep", "--config", cfg});
    CHECK(r.code == 1);
    CHECK(r.err.find("line 2") != std::string::npos);
  }
  SUBCASE("missing config file is an I/O error") {
    CHECK(invoke({"metrics", "--config", dir.file("none.cfg")}).code == 2);
  }
  SUBCASE("parse_config") {
    std::istringstream in("r = 0.3  # radius\n\ntheta=1\n");
    const auto pairs = qbound::cli::parse_config(in);
    REQUIRE(pairs.size() == 2u);
    CHECK(pairs[0].first == "r");
    CHECK(pairs[0].second == "0.3");
    std::istringstream bad("no equals sign\n");
    CHECK_THROWS_AS(qbound::cli::parse_config(bad), qbound::ConstructionError);
  }
}

TEST_CASE("selftest subcommand") {
  const Result r = invoke({"selftest"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("selftest passed") != std::string::npos);
}
