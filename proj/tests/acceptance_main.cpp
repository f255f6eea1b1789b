#include <cstdio>

#include "phidual/verification.hpp"

int main() {
  int failed = 0;
  phidual::run_acceptance_suite([&](const phidual::CriterionResult& r) {
    std::printf("%s\n", phidual::format_criterion(r).c_str());
    std::fflush(stdout);
    failed += !r.passed;
  });
  std::printf("%s: %d of 12 criteria failed\n", failed ? "FAIL" : "PASS", failed);
  return failed ? 1 : 0;
}
