// Standalone property suite. Prints one line per property and exits with the
// number of failures.
#include <chrono>
#include <cstdio>

#include "property_checks.hpp"

int main() {
  int failures = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& r : digitop_props::run_all_properties()) {
    auto t1 = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(t1 - t0).count();
    t0 = t1;
    std::printf("%s  %s (%.1fs): %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), s,
                r.detail.c_str());
    failures += !r.pass;
  }
  if (failures) std::printf("%d propert%s failed\n", failures, failures == 1 ? "y" : "ies");
  return failures;
}
