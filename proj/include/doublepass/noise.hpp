#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "doublepass/epr.hpp"
#include "doublepass/fidelity.hpp"
#include "doublepass/gaussian.hpp"
#include "doublepass/params.hpp"

namespace doublepass {

// Damping exponent of the noisy memory (eta + kappa2*(1-2r)) or growth
// exponent of the noisy squeezer (kappa2*(1-2r) - eta), per params.setup.
double generalized_exponent(const ProtocolParams& params);

// One register mode of a noisy input-output relation.
//
// `swapped` marks modes whose quadrature pair enters the output rows in
// crossed order (the x-row couples to the mode's second quadrature); those
// couplings are the ones that act as active, photon-pair terms. Modes that
// share `family` are the growing/decaying envelope pair on one sideband of
// one pulse; their quadrature rows are not orthogonal, they overlap by the
// scalar stored in NoisyIOBundle::family_overlap. A family never mixes
// swapped with unswapped members.
struct BundleMode {
  std::string label;
  int family = -1;    // -1: orthogonal to every other register mode
  int env_sign = 0;   // +1 growing envelope, -1 decaying, 0 flat/standalone
  bool swapped = false;
};

// Coefficient bundle of one noisy input-output relation, always with a
// single canonical output pair (two rows).
//
// S maps the register written in *display order* — column pair j holds mode
// j's quadratures in the order they feed the output rows, i.e. reversed for
// swapped modes — so every builder below emits plain c_j * I2 blocks. The
// residual pieces that cannot be attributed to a unit register mode are kept
// as an explicit additive noise matrix Y plus its commutator part Yc; both
// are exactly the second moments of the dropped single-quadrature kernel.
//
// Output second moments and commutator of the bundle:
//   cov  = S (G/2) S^T + Y,      G  = gram()
//   comm = S C S^T + Yc,         C  = comm()
// A physically consistent bundle has comm = [[0,1],[-1,0]] exactly; the
// closed forms below satisfy this identity to rounding for every parameter
// set, which is what commutator_defect() measures.
struct NoisyIOBundle {
  std::vector<BundleMode> modes;
  std::vector<double> family_overlap;  // indexed by BundleMode::family
  Eigen::MatrixXd S;                   // 2 x 2m, display order
  Eigen::MatrixXd Y;                   // 2 x 2, symmetric residual noise
  Eigen::MatrixXd Yc;                  // 2 x 2, antisymmetric residual
  Eigen::VectorXd c;                   // displayed coefficients, see builders
  std::string out_label;

  int n_modes() const { return static_cast<int>(modes.size()); }
  int find_mode(const std::string& label) const;  // -1 if absent

  Eigen::MatrixXd gram() const;  // 2m x 2m second-moment metric (x2)
  Eigen::MatrixXd comm() const;  // 2m x 2m commutator metric (units of i)
  Eigen::MatrixXd out_covariance() const;
  Eigen::MatrixXd out_commutator() const;
  // max-norm distance of out_commutator() from the canonical form
  double commutator_defect() const;
};

// Atomic write-in relation. Register (in display order): incoming atoms,
// the upper-sideband plus mode of the write pulse (the signal slot), the
// lower-sideband plus mode (swapped), and the atomic Langevin mode. The
// mid-wall light noise picked up by the atoms enters only through one light
// quadrature and is housed in Y; its displayed weight is c(4).
//   c = (atoms, us+, ls+, atomic noise, mid-wall residual)
NoisyIOBundle noisy_write_in(const ProtocolParams& params);

// Read-out relation for the retrieved upper-sideband minus mode. The
// displayed coefficients follow the fixed order
//   c1 atoms            c2 us+ in      c3 ls+ in (swapped)
//   c4 us- in           c5 ls- in (swapped)
//   c6 atomic noise     c7 exit-wall noise
//   c8 mid-wall noise   c9 mid-wall residual envelope  e^{-wT}e^{wt/2}-e^{-wt/2}
// all after the final wall. c8 and c9 ride the same noise quadrature, so the
// register carries one effective mid-wall mode (coefficient c8 plus the
// projection of the c9 kernel onto it) and Y/Yc keep the orthogonal rest.
// At eta = r = 0 the list collapses to c1 = -sqrt(1-e^{-k2}),
// c2 = e^{-k2/2}.
NoisyIOBundle noisy_read_out(const ProtocolParams& params);

// Write-in followed by read-out on the same parameter set; the register
// concatenates the write-pulse modes (scaled by the read-out atom pickup)
// with the read-pulse modes. Honors params.first_wall_loss by splitting the
// signal slot into sqrt(1-r) * signal + sqrt(r) * wall vacuum.
// The signal mode is labeled "signal in".
NoisyIOBundle noisy_complete_transfer(const ProtocolParams& params);

// Passive/active split of a complete-transfer bundle.
//   out = sum k_i a_i + sum kt_j b_j^dagger
// N_a^2 = sum|k|^2 (incl. residual), N_c^2 = sum|kt|^2 (incl. residual),
// and N_a^2 - N_c^2 = 1 whenever the bundle preserves the commutator.
struct BogoliubovDecomp {
  std::vector<std::complex<double>> k;        // passive; k[0] is the signal
  std::vector<std::complex<double>> k_tilde;  // active
  double n_a = 1.0;
  double n_c = 0.0;
  bool weak_noise = true;  // n_c <= 0.3, first-order treatment trustworthy
};

// Throws std::runtime_error if the bundle's commutator identity
// N_a^2 - N_c^2 = 1 fails beyond 1e-6 (internal inconsistency).
BogoliubovDecomp bogoliubov_decompose(const NoisyIOBundle& bundle);

// Transfer fidelity of the qubit alpha|0> + beta|1> through the decomposed
// channel, first order in the added noise:
//   F = (|alpha|^2 - |beta|^2 k1 (1 - N_c^2/sqrt(1+N_c^2)))^2 / (1+N_c^2)
// Requires |alpha|^2+|beta|^2 = 1 (throws std::invalid_argument).
double noisy_qubit_fidelity(const BogoliubovDecomp& decomp,
                            std::complex<double> alpha,
                            std::complex<double> beta);

// Bloch-sphere average of noisy_qubit_fidelity over the complete transfer.
// The incoming qubit crosses the first cell wall, so the transfer is built
// with first-wall loss regardless of params.first_wall_loss. per_state is
// the equatorial qubit.
FidelityReport noisy_average_qubit(const ProtocolParams& params);

// Ensemble-average fidelity for coherent inputs of width n through the
// complete noisy transfer (no first-wall damping of the signal: the
// ensemble is referenced to the mode entering the cell). Reduces to
// 1/(1 + e^{-2 k2} n) at eta = r = 0.
double noisy_coherent_fidelity(const ProtocolParams& params, double n);

struct NoisyEprResult {
  double delta_epr = 0.0;
  FeedbackResult squeezing;
};

// Noisy two-mode squeezing run: EPR variance of (atoms, retrieved plus
// mode) and the measurement-feedback spin squeezing. If g is empty the
// gain is optimized by golden-section search (the variance is an exact
// parabola in g, so the numerical optimum matches Cov/Var analytically).
NoisyEprResult noisy_epr_and_squeezing(const ProtocolParams& params,
                                       std::optional<double> g = std::nullopt);

// Second moments of the noisy squeezer run: variances of each output pair
// and the symmetrized cross covariance Cov(p_A', X~+') = Cov(x_A', P~+').
// Exposed for oracle comparison and the optimizers.
struct SqueezerMoments {
  double var_atom = 0.0;   // per-quadrature atomic output variance
  double var_light = 0.0;  // per-quadrature retrieved-mode variance
  double cross = 0.0;
};
SqueezerMoments noisy_squeezer_moments(const ProtocolParams& params);

struct CouplingOptimum {
  double kappa2 = 0.0;
  double value = 0.0;  // objective at the optimum
};

// Argmin of the noisy EPR variance over the coupling at fixed losses
// (golden section on [lo, hi], 1e-6 in the argument). The variance is
// unimodal in kappa2: gain wins first, amplified noise wins eventually.
CouplingOptimum optimize_epr_coupling(ProtocolParams params, double lo = 0.01,
                                      double hi = 10.0);

}  // namespace doublepass
