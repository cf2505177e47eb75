#pragma once

// Cross-checks between independent evaluation routes of the same quantity.

#include <string>
#include <vector>

#include "qbound/qubit.hpp"

namespace qbound {

/// r in {0.1, 0.5, 0.9} x theta in {pi/6, pi/2} x phi in {0.3, 3 pi/4}.
std::vector<QubitState> standard_grid();

/// r in {0.1, ..., 0.9} x theta in {pi/6, pi/2} x phi in {0.3, 3 pi/4}.
std::vector<QubitState> closed_form_grid();

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      ///< worst observed residual or slack
  double tolerance = 0.0;
  std::string detail;
};

/// Runs every dual-route and invariant check; never throws for a failing check.
std::vector<CheckResult> run_selftest();

}  // namespace qbound
