#pragma once

#include <string>
#include <vector>

#include "doublepass/table.hpp"

namespace doublepass {

// Reproducible data panels with stable ids. The historical labels around
// ids 8-10 are ambiguous, so the mapping is fixed by parameter content
// (see figure_caption / the CLI help text):
//   8a/8b EPR variance with losses, 9a/9b spin squeezing with losses,
//   10a/10b maximal transfer fidelity versus reflection.
std::vector<std::string> figure_ids();

// One-line description of a panel; throws std::invalid_argument on an
// unknown id.
std::string figure_caption(const std::string& id);

// Full data table for a panel, metadata preamble included.
DataTable figure_table(const std::string& id);

// One swept abscissa, one protocol quantity, optional inner coupling
// optimization per point.
struct SweepConfig {
  std::string variable = "kappa2";  // kappa2 | r | eta | n
  double from = 0.0;
  double to = 5.0;
  int steps = 51;  // >= 2
  // coherent_fidelity | qubit_fidelity | epr_variance | squeezing
  std::string quantity = "coherent_fidelity";
  double kappa2 = 1.0;  // fixed values for whatever is not swept
  double eta = 0.0;
  double r = 0.0;
  double n = 8.0;  // coherent ensemble width
  bool optimize_kappa2 = false;
};

DataTable sweep_table(const SweepConfig& config);

}  // namespace doublepass
