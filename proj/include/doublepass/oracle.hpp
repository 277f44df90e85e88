#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "doublepass/envelope.hpp"
#include "doublepass/gaussian.hpp"
#include "doublepass/params.hpp"

namespace doublepass {

// Where a traced vacuum ancilla entered the loop. Lets callers compare noise
// pickup per source against closed-form budgets.
enum class AncillaChannel : std::uint8_t {
  first_wall,  // incoming signal crosses the first cell wall (optional)
  atomic,      // spontaneous-decay Langevin pair on the atoms
  mid_wall,    // two crossings between the passes, amplitude sqrt(1-2r)
  exit_wall,   // final crossing on the way out, amplitude sqrt(1-r)
};

// Slice-by-slice integrator for the double-pass loop, the ground truth that
// every closed-form input-output relation is checked against.
//
// The pulse is split into N localized slices. Step k applies, in order:
// first-wall loss on slice k (flag), the first-pass kick on slice k, the
// between-pass wall loss on slice k-d, the delayed second-pass kick on slice
// k-d (sign flipped for the squeezer), the exit-wall loss, atomic decay, and
// the Larmor rotation. Steps continue past the pulse end, kicks only, until
// the loop of length d has drained. Every sub-step is an exact symplectic or
// beam-splitter map, so the remaining error against the continuum relations
// is physical: finite N and finite omega_T.
//
// Kicks per slice, with eps = sqrt(kappa2/N) and epst = sqrt(1-2r)*eps:
//   pass 1:  x_A += eps*P_k,   X_k += eps*p_A
//   pass 2 (memory):   p_A -= epst*X_j,  P_j -= epst*x_A
//   pass 2 (squeezer): p_A += epst*X_j,  P_j += epst*x_A
// The second-pass coupling is already reduced because the classical beam
// crossed two walls; the quantum slice is damped separately by the mid-wall
// beam splitter, so the conserved-P structure of the first pass emerges
// rather than being imposed.
//
// The loop is Larmor-synchronized: the physical delay is far shorter than a
// Larmor period, but buffering quantizes it to d full slices, which would
// add a spurious lag angle d*omega_T/N to every second-pass kick (and the
// lag grows with omega_T, swamping the physics it resolves). The delayed
// kick therefore couples through the atomic quadratures rotated back by the
// lag angle — still one exact symplectic kick — so the composed map carries
// the causal ordering of the buffer without the artificial rotation.
class PulseOracle {
 public:
  explicit PulseOracle(const ProtocolParams& params);

  const ProtocolParams& params() const { return params_; }
  int n_slices() const { return n_; }
  int n_ancillas() const { return n_coords_ - 2 * (n_ + 1); }
  // channel tag per ancilla quadrature, in order of injection
  const std::vector<AncillaChannel>& ancilla_channels() const {
    return channels_;
  }

  // One output functional of the composed map expressed over the initial
  // coordinates: the atoms, the 2N interleaved slice quadratures, and every
  // traced ancilla quadrature (each a vacuum of variance 1/2).
  struct Row {
    Eigen::Vector2d atoms;
    Eigen::VectorXd light;
    Eigen::VectorXd ancilla;

    // second-moment noise the row acquires from the traced ancillas
    double added_noise() const { return 0.5 * ancilla.squaredNorm(); }
  };

  Row atom_row(int quad) const;  // quad 0: x_A out, 1: p_A out
  // quadrature of a temporal mode at the exit, quad 0: X out, 1: P out
  Row mode_row(const ModeEnvelope& env, int quad) const;
  // arbitrary functional over the final (x_A, p_A, X_0, P_0, ...) order
  Row output_row(const Eigen::VectorXd& functional) const;

  // summed squared ancilla coefficients of one channel
  double channel_power(const Row& row, AncillaChannel channel) const;

 private:
  struct Op {
    enum class Kind : std::uint8_t {
      kick_first,
      kick_second_memory,
      kick_second_squeezer,
      rotate,
      beam_split,
    };
    Kind kind;
    int a = 0;    // first target coordinate (X_k for kicks, pair base for BS)
    int anc = 0;  // first ancilla coordinate (beam_split only)
    double c1 = 0.0;  // strength*cos(lag) / cos / transmitted amplitude
    double c2 = 0.0;  // strength*sin(lag) / sin / reflected amplitude
  };

  void push_kick(Op::Kind kind, int slice, double strength, double lag);
  void push_beam_split(int coord, double keep, AncillaChannel channel);
  void adjoint_sweep(Eigen::VectorXd& w) const;

  ProtocolParams params_;
  int n_;
  int n_coords_;
  std::vector<Op> ops_;
  std::vector<AncillaChannel> channels_;
};

// Exact composed map over the modes {atoms, slice 0, ..., slice N-1}; all
// noise ancillas are traced into Y, which is identically zero in the ideal
// case. Dense in the slice count — fine up to a few thousand slices, use
// PulseOracle rows directly beyond that.
LinearIOMap integrate_ideal(const ProtocolParams& params);   // needs eta=r=0
LinearIOMap integrate_noisy(const ProtocolParams& params);

// Atom x-row of a composed map in the basis {atoms, envelope mode, orthogonal
// rest}: (self-coefficient, mode coefficient, residual light norm). The mode
// coefficient is the projection onto the quadrature that carries the atom
// coupling: X for upper-sideband envelopes, P for lower-sideband ones.
Eigen::Vector3d project_mode(const LinearIOMap& map, const ModeEnvelope& env);

}  // namespace doublepass
