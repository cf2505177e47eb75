#include <doctest.h>

#include <set>
#include <string>

#include "qbound/selftest.hpp"

using namespace qbound;

TEST_CASE("grids") {
  CHECK(standard_grid().size() == 12u);
  CHECK(closed_form_grid().size() == 36u);
}

TEST_CASE("every self-test check passes and is named uniquely") {
  const auto results = run_selftest();
  CHECK(results.size() >= 10u);
  std::set<std::string> names;
  for (const auto& r : results) {
    INFO(r.name << ": value " << r.value << " tolerance " << r.tolerance << " " << r.detail);
    CHECK(r.passed);
    CHECK(names.insert(r.name).second);
  }
}
