#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qbound/bounds.hpp"

namespace qbound::cli {

enum ExitCode : int {
  kOk = 0,
  kDomainOrValidation = 1,
  kIo = 2,
  kSelftestFailed = 3,
};

/// Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;  ///< "metrics", "povm validate", "bounds sweep", "audit", "simulate", "selftest"
  double r = 0.5;
  double theta = 1.5707963267948966;
  double phi = 2.356194490192345;
  double eps = 0.0;
  double sigma = 3.0;
  double r_min = 0.1;
  double r_max = 0.9;
  int steps = 9;
  std::uint64_t samples = 100000;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string svg;
  std::string povm_csv;
  std::string format;
  bool log_y = false;
  int panels = 64;
  int order = 16;

  QuadSpec quad() const;
};

/// Keys accepted in a config file (underscore spelling of the long flags).
const std::vector<std::string>& config_keys();

/// Parses `key=value` lines; '#' starts a comment. Throws ConstructionError on
/// unknown keys or malformed lines (messages carry the line number).
std::vector<std::pair<std::string, std::string>> parse_config(std::istream& in);

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_sweep_svg(std::ostream& out, const std::vector<SweepRow>& rows, bool log_y);

}  // namespace qbound::cli
