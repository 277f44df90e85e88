#pragma once

#include <utility>

#include "doublepass/gaussian.hpp"

namespace doublepass {

struct FeedbackResult {
  double gain = 0.0;      // applied gain g
  double var_p_fb = 0.0;  // (Delta p_A)^2 after measurement + feedback
  double var_x = 0.0;     // conjugate (Delta x_A)^2 (feedback leaves it alone)
};

// Active two-mode squeezer over {atoms, L~-, L~+, comp}; writing
// e = e^{k2/2}, s = sqrt(e^{k2}-1):
//   x_A'    = e x_A + s p~-        p_A'    = e p_A + s x~-
//   p~+'    = s x_A + e p~-        x~+'    = s p_A + e x~-
//   L~-'    = L~+ (completion slot), comp' = comp
LinearIOMap squeezer_maps(double kappa2);

// (squeezed, antisqueezed) EPR variances (e^{-2z}, e^{+2z}),
// z = acosh(e^{k2/2})
std::pair<double, double> epr_variances(double kappa2);

// measurement of x~+ out, feedback p_A -> p_A - g x~+ (ensemble average)
FeedbackResult spin_squeeze(double kappa2, double g);

// gain minimizing the post-feedback variance: 2es/(e^2+s^2); 0 at kappa2 = 0
double optimal_gain(double kappa2);

}  // namespace doublepass
