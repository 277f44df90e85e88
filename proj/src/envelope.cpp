#include "doublepass/envelope.hpp"

#include <cmath>
#include <stdexcept>

namespace doublepass {

double ModeEnvelope::continuum_norm() const {
  if (rate < 0.0) throw std::invalid_argument("envelope: rate must be >= 0");
  if (rate == 0.0) return 1.0;
  // expm1 keeps the w->0 limit smooth
  if (exponent_sign > 0) return std::sqrt(rate / std::expm1(rate));
  return std::sqrt(rate / (-std::expm1(-rate)));
}

Eigen::VectorXd ModeEnvelope::weights(int n) const {
  if (n < 1) throw std::invalid_argument("envelope: need at least one slice");
  if (rate < 0.0) throw std::invalid_argument("envelope: rate must be >= 0");
  Eigen::VectorXd w(n);
  const double half = 0.5 * exponent_sign * rate;
  for (int k = 0; k < n; ++k) w(k) = std::exp(half * k / n);
  w /= w.norm();
  return w;
}

ModeEnvelope plus_mode(double rate, double omega_T, Sideband sb) {
  return ModeEnvelope{+1, rate, omega_T, sb};
}

ModeEnvelope minus_mode(double rate, double omega_T, Sideband sb) {
  return ModeEnvelope{-1, rate, omega_T, sb};
}

ModeEnvelope sideband_mode(Sideband which, double omega_T) {
  return ModeEnvelope{+1, 0.0, omega_T, which};
}

Eigen::VectorXd mode_x_row(const ModeEnvelope& env, int n) {
  const Eigen::VectorXd f = env.weights(n);
  Eigen::VectorXd row(2 * n);
  for (int k = 0; k < n; ++k) {
    const double th = env.omega_T * k / n;
    const double c = std::cos(th), s = std::sin(th);
    if (env.sideband == Sideband::upper) {
      row(2 * k) = f(k) * s;      // X_k
      row(2 * k + 1) = f(k) * c;  // P_k
    } else {
      row(2 * k) = f(k) * c;
      row(2 * k + 1) = f(k) * s;
    }
  }
  return row;
}

Eigen::VectorXd mode_p_row(const ModeEnvelope& env, int n) {
  const Eigen::VectorXd f = env.weights(n);
  Eigen::VectorXd row(2 * n);
  for (int k = 0; k < n; ++k) {
    const double th = env.omega_T * k / n;
    const double c = std::cos(th), s = std::sin(th);
    if (env.sideband == Sideband::upper) {
      row(2 * k) = -f(k) * c;
      row(2 * k + 1) = f(k) * s;
    } else {
      row(2 * k) = -f(k) * s;
      row(2 * k + 1) = f(k) * c;
    }
  }
  return row;
}

double envelope_overlap(const ModeEnvelope& a, const ModeEnvelope& b, int n) {
  return a.weights(n).dot(b.weights(n));
}

double plus_minus_overlap(double rate) {
  if (rate < 0.0) throw std::invalid_argument("overlap: rate must be >= 0");
  if (rate == 0.0) return 1.0;
  return (rate / 2.0) / std::sinh(rate / 2.0);
}

}  // namespace doublepass
