#pragma once

#include <functional>

namespace doublepass {

struct MinResult {
  double x = 0.0;
  double value = 0.0;
  int evals = 0;
};

// Golden-section minimization of a unimodal function on [lo, hi]; stops when
// the bracket is narrower than xtol.
MinResult golden_section_minimize(const std::function<double(double)>& f,
                                  double lo, double hi, double xtol = 1e-6);

// Golden section followed by one parabolic-vertex refinement through the
// final bracket; worthwhile when the argument is needed beyond xtol on a
// smooth objective.
MinResult polished_minimize(const std::function<double(double)>& f, double lo,
                            double hi, double xtol = 1e-6);

}  // namespace doublepass
