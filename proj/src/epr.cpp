#include "doublepass/epr.hpp"

#include <cmath>
#include <stdexcept>

namespace doublepass {

LinearIOMap squeezer_maps(double kappa2) {
  if (kappa2 < 0.0) throw std::invalid_argument("squeezer_maps: kappa2 must be >= 0");
  const double e = std::exp(kappa2 / 2.0);
  const double s = std::sqrt(std::expm1(kappa2));
  MatrixXd S = MatrixXd::Zero(8, 8);
  // atoms row: diagonal growth + swapped pickup of L~-
  S(0, 0) = e; S(1, 1) = e;
  S(0, 3) = s; S(1, 2) = s;
  // L~- output slot carries L~+ through
  S(2, 4) = 1; S(3, 5) = 1;
  // L~+ row: swapped pickup of atoms + diagonal growth of L~-
  S(5, 0) = s; S(4, 1) = s;
  S(4, 2) = e; S(5, 3) = e;
  // spectator pulse content
  S(6, 6) = 1; S(7, 7) = 1;
  const std::vector<std::string> labels = {"atoms", "L~-", "L~+", "comp"};
  return make_map(S, labels, labels);
}

std::pair<double, double> epr_variances(double kappa2) {
  if (kappa2 < 0.0) throw std::invalid_argument("epr_variances: kappa2 must be >= 0");
  const double z = std::acosh(std::exp(kappa2 / 2.0));
  return {std::exp(-2.0 * z), std::exp(2.0 * z)};
}

FeedbackResult spin_squeeze(double kappa2, double g) {
  if (kappa2 < 0.0) throw std::invalid_argument("spin_squeeze: kappa2 must be >= 0");
  const double e = std::exp(kappa2 / 2.0);
  const double s = std::sqrt(std::expm1(kappa2));
  FeedbackResult res;
  res.gain = g;
  res.var_p_fb = 0.5 * (e - g * s) * (e - g * s) + 0.5 * (s - g * e) * (s - g * e);
  res.var_x = 0.5 * (e * e + s * s);
  return res;
}

double optimal_gain(double kappa2) {
  if (kappa2 < 0.0) throw std::invalid_argument("optimal_gain: kappa2 must be >= 0");
  if (kappa2 == 0.0) return 0.0;  // no light-atom correlations to feed back
  const double e = std::exp(kappa2 / 2.0);
  const double s = std::sqrt(std::expm1(kappa2));
  return 2.0 * e * s / (e * e + s * s);
}

}  // namespace doublepass
