#pragma once

#include <Eigen/Dense>

namespace doublepass {

enum class Sideband { upper, lower };

// Temporal light mode over one pulse: scalar envelope e^{sign*rate*t/(2T)}
// under Larmor rotation R(t), attached to one sideband. `rate` is the
// dimensionless exponent w*T (kappa^2 in the ideal case); rate = 0 gives the
// flat sideband modes.
//
// Quadrature content over the slowly varying light quadratures (X_k, P_k),
// writing th_k = omega_T * k/N:
//   upper:  X_m = sum f_k (cos(th_k) P_k + sin(th_k) X_k),
//           P_m = sum f_k (sin(th_k) P_k - cos(th_k) X_k)
//   lower:  P_m = sum f_k (cos(th_k) P_k - sin(th_k) X_k),
//           X_m = sum f_k (sin(th_k) P_k + cos(th_k) X_k)
// Both pairs satisfy [X_m, P_m] = i when sum f_k^2 = 1.
struct ModeEnvelope {
  int exponent_sign = +1;   // +1 or -1; irrelevant when rate == 0
  double rate = 0.0;        // w*T >= 0
  double omega_T = 0.0;     // Larmor phase over the pulse
  Sideband sideband = Sideband::upper;

  // Continuum prefactor in units of 1/sqrt(T):
  // sqrt(rate/(e^{rate}-1)) for +, sqrt(rate/(1-e^{-rate})) for -, 1 when flat.
  double continuum_norm() const;

  // Discrete scalar envelope sampled at t_k = k/N, renormalized so that the
  // squared weights sum to 1.
  Eigen::VectorXd weights(int n) const;
};

ModeEnvelope plus_mode(double rate, double omega_T, Sideband sb);
ModeEnvelope minus_mode(double rate, double omega_T, Sideband sb);
// flat-envelope sideband mode (rate -> 0 limit of the plus mode)
ModeEnvelope sideband_mode(Sideband which, double omega_T);

// Quadrature functionals of the mode over the interleaved slice coordinates
// (X_0, P_0, ..., X_{N-1}, P_{N-1}), following the conventions above. The two
// rows of one mode are Euclidean-orthonormal; rows of different envelopes on
// the same sideband overlap by the scalar envelope overlap, and rows of
// opposite sidebands are orthogonal whenever omega_T is a multiple of 2*pi.
Eigen::VectorXd mode_x_row(const ModeEnvelope& env, int n);
Eigen::VectorXd mode_p_row(const ModeEnvelope& env, int n);

// discrete scalar envelope overlap sum_k a_k b_k on a shared n-slice pulse
double envelope_overlap(const ModeEnvelope& a, const ModeEnvelope& b, int n);

// analytic continuum overlap of the +/- pair at equal rate:
// (rate/2)/sinh(rate/2), -> 1 as rate -> 0
double plus_minus_overlap(double rate);

}  // namespace doublepass
