#include "doublepass/fidelity.hpp"

#include <cmath>
#include <stdexcept>

#include "doublepass/memory.hpp"

namespace doublepass {

double classical_limit_coherent(double n) {
  if (n < 0.0) throw std::invalid_argument("classical limit: n must be >= 0");
  return (2.0 * n + 1.0) / (4.0 * n + 1.0);
}

double classical_limit_qubit() { return 2.0 / 3.0; }

double coherent_overlap(const Eigen::Vector2d& mean_in,
                        const Eigen::Vector2d& mean_out,
                        const Eigen::Vector2d& var_out) {
  if (!(var_out(0) > 0.0 && var_out(1) > 0.0))
    throw std::invalid_argument("coherent_overlap: variances must be > 0");
  const double ax = 1.0 + 2.0 * var_out(0);
  const double ap = 1.0 + 2.0 * var_out(1);
  const double dx = mean_in(0) + mean_out(0);
  const double dp = mean_in(1) + mean_out(1);
  return 2.0 / std::sqrt(ax * ap) * std::exp(-dx * dx / ax - dp * dp / ap);
}

double average_coherent_from_io(double a, double vx, double vp, double n) {
  if (n < 0.0) throw std::invalid_argument("average fidelity: n must be >= 0");
  // <exp(-b x^2)> over x ~ N(0, n) is 1/sqrt(1+2nb), per quadrature,
  // with b = (1+a)^2/(1+2V)
  const double ax = 1.0 + 2.0 * vx;
  const double ap = 1.0 + 2.0 * vp;
  const double bx = (1.0 + a) * (1.0 + a) / ax;
  const double bp = (1.0 + a) * (1.0 + a) / ap;
  return 2.0 / std::sqrt(ax * ap) / std::sqrt((1.0 + 2.0 * n * bx) * (1.0 + 2.0 * n * bp));
}

namespace {
// signal gain and output variances of the retrieved mode, from the composed
// transfer applied to vacuum
struct TransferIO {
  double a;
  double vx, vp;
};

TransferIO ideal_transfer_io(double kappa2) {
  const LinearIOMap m = complete_transfer_map(kappa2);
  const int sig_in = 0, sig_out = 3;  // input L+ -> readout L-
  TransferIO io;
  io.a = m.S(2 * sig_out, 2 * sig_in);
  const GaussianState out = apply_map(make_vacuum(4), m);
  io.vx = out.cov(2 * sig_out, 2 * sig_out);
  io.vp = out.cov(2 * sig_out + 1, 2 * sig_out + 1);
  return io;
}
}  // namespace

FidelityReport average_coherent(double n, double kappa2) {
  const TransferIO io = ideal_transfer_io(kappa2);
  FidelityReport rep;
  const double amp = std::sqrt(n);
  rep.per_state = coherent_overlap({amp, amp}, {io.a * amp, io.a * amp},
                                   {io.vx, io.vp});
  rep.average = average_coherent_from_io(io.a, io.vx, io.vp, n);
  rep.classical_limit = classical_limit_coherent(n);
  rep.beats_classical = rep.average > rep.classical_limit;
  return rep;
}

double qubit_overlap(std::complex<double> alpha, std::complex<double> beta,
                     double kappa2) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-9)
    throw std::invalid_argument("qubit_overlap: |alpha|^2 + |beta|^2 must be 1");
  if (kappa2 < 0.0) throw std::invalid_argument("qubit_overlap: kappa2 must be >= 0");
  const double c = -std::expm1(-kappa2);  // 1 - e^{-k2}
  const double f = std::norm(alpha) + c * std::norm(beta);
  return f * f;
}

double bloch_average(
    const std::function<double(std::complex<double>, std::complex<double>)>& f,
    int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 2)
    throw std::invalid_argument("bloch_average: grid too small");
  // self-normalizing trapezoid: dividing by the quadrature of the measure
  // itself keeps constants exact and cancels the O(h^2) error of sin(th)
  double acc = 0.0, measure = 0.0;
  for (int i = 0; i <= n_theta; ++i) {
    const double th = M_PI * i / n_theta;
    const double wth = ((i == 0 || i == n_theta) ? 0.5 : 1.0) * std::sin(th);
    double row = 0.0, row_w = 0.0;
    for (int j = 0; j <= n_phi; ++j) {
      const double phi = 2.0 * M_PI * j / n_phi;
      const double wphi = (j == 0 || j == n_phi) ? 0.5 : 1.0;
      const std::complex<double> alpha(std::cos(th / 2.0), 0.0);
      const std::complex<double> beta = std::polar(std::sin(th / 2.0), phi);
      row += wphi * f(alpha, beta);
      row_w += wphi;
    }
    acc += wth * row;
    measure += wth * row_w;
  }
  return acc / measure;
}

FidelityReport average_qubit(double kappa2) {
  // The sphere average of (|alpha|^2 + c |beta|^2)^2 reduces to
  // int_0^1 (c + (1-c)u)^2 du = (1 + c + c^2)/3 with u = |alpha|^2.
  const TransferIO io = ideal_transfer_io(kappa2);
  const double c = -io.a;  // composed signal coefficient is -(1-e^{-k2})
  FidelityReport rep;
  rep.per_state = 0.25 * (1.0 + c) * (1.0 + c);
  rep.average = (1.0 + c + c * c) / 3.0;
  rep.classical_limit = classical_limit_qubit();
  rep.beats_classical = rep.average > rep.classical_limit;
  return rep;
}

}  // namespace doublepass
