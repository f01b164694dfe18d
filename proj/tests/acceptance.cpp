// Runs the acceptance suite twice, prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <cstdio>

#include "maxnorm/acceptance.hpp"

int main() {
  using namespace maxnorm;
  auto first = run_acceptance([](const CriterionResult& r) {
    std::printf("%s\n", table_line(r).c_str());
    std::fflush(stdout);
  });
  auto second = run_acceptance();
  auto det = determinism_result(acceptance_json(first).dump(), acceptance_json(second).dump());
  std::printf("%s\n", table_line(det).c_str());
  bool ok = det.pass;
  for (const auto& r : first) ok = ok && r.pass;
  return ok ? 0 : 1;
}
