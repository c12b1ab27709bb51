// Runs every acceptance criterion on the canonical rod and prints one line
// per criterion. Exit status 1 when a gating criterion fails.
#include <cstdio>
#include <exception>

#include "rodpulse/validation.hpp"

int main() {
  using namespace rodpulse;
  try {
    const auto report = validation::run_validation(canonical_scenario(), validation::ValidationSettings{});
    for (const auto& c : report.criteria) {
      std::printf("criterion %2d %s  %-36s measured %.6e  bound %.6e%s\n", c.id, c.passed ? "PASS" : "FAIL",
                  c.title.c_str(), c.measured, c.bound, c.gating ? "" : "  (diagnostic, not gating)");
    }
    const bool ok = report.gating_passed();
    std::printf("acceptance: %s\n", ok ? "all gating criteria pass" : "gating failure");
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
    return 1;
  }
}
