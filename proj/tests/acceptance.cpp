#include <algorithm>
#include <cstdio>
#include <string>

#include "xxz/verify.hpp"

int main() {
  using namespace xxz;
  const VerificationReport report = run_suite(SuiteSettings{}, {"all"});
  bool ok = true;
  for (const std::string& id : criterion_ids()) {
    int total = 0, failed = 0;
    double worst = 0.0;
    std::string first_failure;
    for (const CheckResult& c : report.checks) {
      if (c.id.rfind(id + ".", 0) != 0) continue;
      ++total;
      if (c.tolerance > 0.0) worst = std::max(worst, c.residual / c.tolerance);
      if (!c.pass) {
        ++failed;
        if (first_failure.empty()) first_failure = c.id + " residual " + std::to_string(c.residual) + " " + c.detail;
      }
    }
    const bool pass = total > 0 && failed == 0;
    ok = ok && pass;
    std::printf("%s %s (%d checks, worst residual/tolerance %.2e)%s%s\n", pass ? "PASS" : "FAIL", id.c_str(), total,
                worst, first_failure.empty() ? "" : ": ", first_failure.c_str());
  }
  std::fflush(stdout);
  return ok ? 0 : 1;
}
