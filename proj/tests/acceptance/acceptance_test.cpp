// Desk-scale acceptance suite: every consistency criterion at its stated
// tolerance, one pass/fail line per criterion. The same criteria back the
// `cellcov validate` command.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>

#include "cellcov/cli/commands.hpp"
#include "cellcov/validate.hpp"
#include "doctest.h"

TEST_CASE("acceptance criteria") {
  const auto scale = cellcov::validate::Scale::standard();
  cellcov::validate::Suite suite(scale);

  std::vector<cellcov::validate::CriterionResult> results;
  for (int id = 1; id <= cellcov::validate::kNumCoreCriteria; ++id) {
    results.push_back(suite.run(id));
  }
  results.push_back(cellcov::cli::reproducibility_criterion(scale));

  for (const auto& r : results) {
    std::printf("[acceptance] %-4s %2d  %s | %s (%.1fs)\n", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    INFO("criterion ", r.id, ": ", r.name, " | ", r.detail);
    CHECK(r.passed);
  }
}
