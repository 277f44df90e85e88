#pragma once

#include <string>
#include <vector>

namespace doublepass {

struct ValidationCheck {
  std::string name;
  double deviation = 0.0;  // worst value observed across the check's grid
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationOptions {
  // fast: N = 1000 slices at Omega*T = 2*pi*50; full: N = 8000 at 2*pi*100
  // with correspondingly tighter tolerances.
  bool full = false;
  // Negative control: re-run the ideal read-out comparison against a map
  // with a planted sign error. A healthy validator must then fail.
  bool corrupt_readout_sign = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  std::vector<std::string> diagnostics;  // informational, never gate
  bool all_pass = true;
  // empty when all_pass; otherwise the first failing check's name
  std::string first_failure;
};

ValidationReport run_validation(const ValidationOptions& options);

}  // namespace doublepass
