#include "doublepass/params.hpp"

#include <cmath>
#include <stdexcept>

namespace doublepass {

double ProtocolParams::default_omega_T() { return 2.0 * M_PI * 50.0; }

void ProtocolParams::validate() const {
  if (!(kappa2 >= 0.0)) throw std::invalid_argument("params: kappa2 must be >= 0");
  if (!(eta >= 0.0)) throw std::invalid_argument("params: eta must be >= 0");
  if (!(r >= 0.0 && r < 0.5))
    throw std::invalid_argument("params: r must lie in [0, 1/2)");
  if (!(omega_T >= 0.0)) throw std::invalid_argument("params: omega_T must be >= 0");
  if (n_segments < 1) throw std::invalid_argument("params: n_segments must be >= 1");
  if (loop_delay_segments < 0)
    throw std::invalid_argument("params: loop_delay_segments must be >= 0");
  if (loop_delay_segments > n_segments)
    throw std::invalid_argument("params: loop delay exceeds the pulse length");
}

std::vector<std::string> ProtocolParams::warnings() const {
  std::vector<std::string> w;
  const double damping = eta + kappa2 * (1.0 - 2.0 * r);
  if (omega_T < 20.0 * damping)
    w.push_back("omega_T < 20*(eta + kappa2*(1-2r)): rotating-wave separation "
                "is weak, closed forms degrade");
  const double turns = omega_T / (2.0 * M_PI);
  if (std::abs(turns - std::round(turns)) > 1e-9 && omega_T > 0.0)
    w.push_back("omega_T is not a multiple of 2*pi: closed-form comparisons "
                "assume an integer number of Larmor turns");
  if (loop_delay_segments == 0)
    w.push_back("loop_delay_segments = 0 breaks the causal pass ordering; "
                "exponential behaviour is lost (ablation only)");
  return w;
}

}  // namespace doublepass
