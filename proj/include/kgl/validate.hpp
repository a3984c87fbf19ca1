#pragma once

#include <string>
#include <vector>

namespace kgl {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
};

/// Fast analytic battery: plane waves, constant-data ODEs, multiplier and
/// lens identities. `fault` names a check whose input is deliberately
/// corrupted (test hook); empty for a normal run.
std::vector<CheckResult> run_validation(const std::string& fault = {});

}  // namespace kgl
