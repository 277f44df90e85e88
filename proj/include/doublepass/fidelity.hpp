#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace doublepass {

struct FidelityReport {
  double per_state = 0.0;       // representative single input (see each op)
  double average = 0.0;
  double classical_limit = 0.0;
  bool beats_classical = false;
};

// best measure-and-prepare average for the width-n coherent ensemble
double classical_limit_coherent(double n);
// best measure-and-prepare average for {vacuum, one-photon} qubits
double classical_limit_qubit();

// Overlap of a coherent input (mean_in, vacuum variances) with a Gaussian
// output of the given means/variances. The retrieved signal carries a minus
// sign, hence the sums inside the squares:
//   F = 2/sqrt((1+2Vx)(1+2Vp))
//       * exp(-(x_in+x_out)^2/(1+2Vx) - (p_in+p_out)^2/(1+2Vp))
double coherent_overlap(const Eigen::Vector2d& mean_in,
                        const Eigen::Vector2d& mean_out,
                        const Eigen::Vector2d& var_out);

// Average of coherent_overlap over amplitudes drawn from a centered Gaussian
// with per-quadrature variance n, for a transfer with signal gain `a`
// (mean_out = a * mean_in) and output variances (vx, vp). Closed form of the
// Gaussian-in-amplitude integral.
double average_coherent_from_io(double a, double vx, double vp, double n);

// Ensemble-average fidelity of the complete ideal transfer, computed by
// composing the protocol maps (not by quoting the final formula).
// per_state is the overlap at the RMS amplitude (sqrt(n), sqrt(n)).
FidelityReport average_coherent(double n, double kappa2);

// Single-qubit transfer fidelity (alpha |0> + beta |1> in the
// {vacuum, one-photon} span) through the ideal complete transfer.
double qubit_overlap(std::complex<double> alpha, std::complex<double> beta,
                     double kappa2);

// Average of f(alpha, beta) over the Bloch sphere, alpha = cos(th/2),
// beta = sin(th/2) e^{i phi}, measure sin(th) dth dphi / 4pi; trapezoid
// quadrature on an n_theta x n_phi grid.
double bloch_average(
    const std::function<double(std::complex<double>, std::complex<double>)>& f,
    int n_theta = 2048, int n_phi = 128);

// Bloch-sphere average of the ideal transfer, built from the composed map's
// signal coefficient (the sphere integral is carried out exactly).
// per_state is the equatorial qubit alpha = beta = 1/sqrt(2).
FidelityReport average_qubit(double kappa2);

}  // namespace doublepass
