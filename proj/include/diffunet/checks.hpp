#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace diffunet {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Numerical property suite behind the `check` command: analytic gradients
/// against central differences, positivity of the convexity bracket, the
/// local/global cost decomposition, diffusion reduction laws, policy
/// validity and run determinism.
std::vector<CheckResult> run_property_suite(std::uint64_t seed = 7);

/// Prints `[PASS] name: detail` lines; returns true when all passed.
bool print_check_results(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace diffunet
