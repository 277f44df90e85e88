#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace doublepass {

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

// Quadrature vectors are ordered (x1, p1, x2, p2, ...). Units: hbar = 1,
// vacuum variance 1/2 per quadrature. All dB figures elsewhere reference
// that 1/2.

// Standard symplectic form, block-diagonal [[0,1],[-1,0]] per mode.
MatrixXd symplectic_form(int n_modes);

struct GaussianState {
  VectorXd means;
  MatrixXd cov;
  std::vector<std::string> labels;  // one per mode; may be empty

  int n_modes() const { return static_cast<int>(means.size()) / 2; }
  // index of a labeled mode, -1 if absent
  int find_mode(const std::string& label) const;
};

GaussianState make_vacuum(int n_modes);
GaussianState make_vacuum(const std::vector<std::string>& labels);

// Smallest eigenvalue of cov + (i/2)Sigma. Physical states have margin
// >= 0 up to rounding.
double physicality_margin(const MatrixXd& cov);
bool is_physical(const GaussianState& state, double tol = 1e-9);

// Affine map on quadrature vectors with additive covariance noise:
//   means' = S means + d,   cov' = S cov S^T + Y.
// Y collects second moments of traced-out vacuum/Langevin ancillas, so one
// struct covers unitary, lossy and noise-driven evolutions alike.
struct LinearIOMap {
  MatrixXd S;
  VectorXd d;
  MatrixXd Y;
  std::vector<std::string> in_labels, out_labels;

  int n_in() const { return static_cast<int>(S.cols()) / 2; }
  int n_out() const { return static_cast<int>(S.rows()) / 2; }
};

LinearIOMap identity_map(int n_modes);
LinearIOMap make_map(const MatrixXd& S,
                     std::vector<std::string> in_labels = {},
                     std::vector<std::string> out_labels = {});

GaussianState apply_map(const GaussianState& state, const LinearIOMap& map);

// second ∘ first (first acts first)
LinearIOMap compose(const LinearIOMap& second, const LinearIOMap& first);

// Place a small map on the listed modes of an n_modes register; identity on
// the rest. modes[i] is the register slot of the map's i-th mode.
LinearIOMap embed_map(const LinearIOMap& map, int n_modes,
                      const std::vector<int>& modes);

// max |S^T Sigma S - Sigma| over entries (square S)
double symplectic_residual(const MatrixXd& S);

// Smallest eigenvalue of Y + (i/2)(Sigma_out - S Sigma_in S^T); a physical
// channel has margin >= 0 up to rounding. Works for rectangular S.
double channel_physicality_margin(const LinearIOMap& map);

// True iff S is symplectic within tol and the added noise Y passes the
// channel physicality check (at phys_tol).
bool check_symplectic(const LinearIOMap& map, double tol = 1e-10,
                      double phys_tol = 1e-9);

// EPR variance of the cross-quadrature pair
//   Delta = Var[(x_a - p_b)/sqrt(2)] + Var[(p_a - x_b)/sqrt(2)].
// Separable states give >= 1; two-mode vacuum gives exactly 1.
double epr_variance(const GaussianState& state, int mode_a, int mode_b);
double epr_variance(const GaussianState& state, const std::string& mode_a,
                    const std::string& mode_b);

}  // namespace doublepass
