// Runs the registered claims and prints one line per acceptance criterion.
// A criterion passes when all of its claims pass within its time budget.
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "langevin/harness.hpp"

using namespace langevin;

int main() {
  const std::map<int, double> budget_s{{1, 1},    {2, 1},    {3, 60},   {4, 600},
                                       {5, 600},  {6, 900},  {7, 900},  {8, 900},
                                       {9, 1800}, {10, 1800}, {11, 600}};
  ExperimentSpec spec;
  spec.seed = 42;
  const auto reports = run_suite(spec, [](const TestReport& r) {
    std::printf("  %s\n", report_line(r).c_str());
    for (const auto& d : r.details) std::printf("      %s\n", d.c_str());
    std::fflush(stdout);
  });

  std::map<int, std::vector<const TestReport*>> by;
  for (const auto& r : reports) by[r.criterion].push_back(&r);
  bool all = true;
  std::printf("\n");
  for (const auto& [c, limit] : budget_s) {
    double ms = 0.0;
    bool pass = !by[c].empty();
    std::string names;
    for (const auto* r : by[c]) {
      ms += r->runtime_ms;
      pass = pass && r->pass;
      names += (names.empty() ? "" : " ") + r->claim;
    }
    const bool in_time = ms <= 1000.0 * limit;
    pass = pass && in_time;
    all = all && pass;
    std::printf("criterion %2d: %s  (%zu claims, %.1f s of %.0f s) %s\n", c, pass ? "PASS" : "FAIL",
                by[c].size(), ms / 1000.0, limit, names.c_str());
  }
  for (const auto* r : by[0])
    std::printf("supplementary %s: %s\n", r->claim.c_str(), r->pass ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
