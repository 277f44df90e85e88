#pragma once

#include <string>
#include <vector>

namespace doublepass {

enum class Setup { memory, squeezer };

// All physical knobs of the double-pass protocols. Times are expressed as
// fractions of the pulse duration T, so eta, r and omega_T are dimensionless.
struct ProtocolParams {
  double kappa2 = 1.0;             // coupling strength kappa^2
  double omega_T = default_omega_T();  // Larmor phase accumulated over the pulse
  int n_segments = 4000;           // pulse slices N for the discrete integrator
  int loop_delay_segments = 1;     // free propagation between the two passes,
                                   // in slices; 0 only for ablation studies
  double eta = 0.0;                // atomic decay over the pulse
  double r = 0.0;                  // reflection per cell-wall crossing, < 1/2
  Setup setup = Setup::memory;
  bool first_wall_loss = false;    // damp the incoming signal mode by sqrt(1-r)
                                   // before the interaction (qubit treatment)

  static double default_omega_T();  // 2*pi*50

  // damping exponent of the noisy memory, w*T = eta + kappa2*(1-2r)
  double wt() const { return eta + kappa2 * (1.0 - 2.0 * r); }
  // growth exponent of the noisy squeezer, kappa2*(1-2r) - eta
  double squeezer_wt() const { return kappa2 * (1.0 - 2.0 * r) - eta; }

  void validate() const;  // throws std::invalid_argument
  // non-fatal diagnostics (slow-rotation regime, omega_T not a multiple of
  // 2*pi, ...)
  std::vector<std::string> warnings() const;
};

}  // namespace doublepass
