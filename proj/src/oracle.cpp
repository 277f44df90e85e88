#include "doublepass/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace doublepass {

namespace {

inline int slice_coord(int k) { return 2 + 2 * k; }

}  // namespace

PulseOracle::PulseOracle(const ProtocolParams& params)
    : params_(params), n_(params.n_segments) {
  params_.validate();
  const int d = params_.loop_delay_segments;
  const double eps = std::sqrt(params_.kappa2 / n_);
  const double epst = std::sqrt(1.0 - 2.0 * params_.r) * eps;
  const double dtheta = params_.omega_T / n_;
  const bool walls = params_.r > 0.0;
  const bool decay = params_.eta > 0.0;
  const bool kicks = params_.kappa2 > 0.0;
  const double keep_wall = std::sqrt(1.0 - params_.r);
  const double keep_mid = std::sqrt(1.0 - 2.0 * params_.r);
  const double keep_atom = std::exp(-0.5 * params_.eta / n_);
  const Op::Kind second = params_.setup == Setup::memory
                              ? Op::Kind::kick_second_memory
                              : Op::Kind::kick_second_squeezer;
  // Larmor angle the atoms gain while a slice sits in the buffer; the
  // second-pass kick is applied in the frame that undoes it (synchronized
  // loop, d/c far below the Larmor period).
  const double lag = d * dtheta;

  n_coords_ = 2 * (n_ + 1);
  ops_.reserve(static_cast<std::size_t>(n_) * 7 + d);

  for (int k = 0; k < n_ + d; ++k) {
    if (k < n_) {
      if (walls && params_.first_wall_loss)
        push_beam_split(slice_coord(k), keep_wall, AncillaChannel::first_wall);
      if (kicks) push_kick(Op::Kind::kick_first, k, eps, 0.0);
    }
    const int j = k - d;
    if (j >= 0 && j < n_) {
      if (walls) push_beam_split(slice_coord(j), keep_mid, AncillaChannel::mid_wall);
      if (kicks) push_kick(second, j, epst, lag);
      if (walls) push_beam_split(slice_coord(j), keep_wall, AncillaChannel::exit_wall);
    }
    if (k < n_) {
      if (decay) push_beam_split(0, keep_atom, AncillaChannel::atomic);
      if (dtheta != 0.0)
        ops_.push_back({Op::Kind::rotate, 0, 0, std::cos(dtheta), std::sin(dtheta)});
    }
  }
}

void PulseOracle::push_kick(Op::Kind kind, int slice, double strength, double lag) {
  ops_.push_back({kind, slice_coord(slice), 0, strength * std::cos(lag),
                  strength * std::sin(lag)});
}

void PulseOracle::push_beam_split(int coord, double keep, AncillaChannel channel) {
  const double leak = std::sqrt(std::max(0.0, 1.0 - keep * keep));
  ops_.push_back({Op::Kind::beam_split, coord, n_coords_, keep, leak});
  n_coords_ += 2;
  channels_.push_back(channel);
  channels_.push_back(channel);
}

// Pulls an output functional w backwards through the op list (w <- K^T w per
// op), so a single O(ops) sweep expresses one output row over all inputs.
void PulseOracle::adjoint_sweep(Eigen::VectorXd& w) const {
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    const Op& op = *it;
    switch (op.kind) {
      case Op::Kind::kick_first:
        // x_A += c*P_k ; X_k += c*p_A
        w[op.a + 1] += op.c1 * w[0];
        w[1] += op.c1 * w[op.a];
        break;
      case Op::Kind::kick_second_memory:
        // x_A -= c2*X_j ; p_A -= c1*X_j ; P_j -= c1*x_A - c2*p_A
        w[op.a] -= op.c2 * w[0] + op.c1 * w[1];
        w[0] -= op.c1 * w[op.a + 1];
        w[1] += op.c2 * w[op.a + 1];
        break;
      case Op::Kind::kick_second_squeezer:
        w[op.a] += op.c2 * w[0] + op.c1 * w[1];
        w[0] += op.c1 * w[op.a + 1];
        w[1] -= op.c2 * w[op.a + 1];
        break;
      case Op::Kind::rotate: {
        const double wx = w[0], wp = w[1];
        w[0] = op.c1 * wx - op.c2 * wp;
        w[1] = op.c2 * wx + op.c1 * wp;
        break;
      }
      case Op::Kind::beam_split: {
        const double t = op.c1, u = op.c2;
        for (int q = 0; q < 2; ++q) {
          const double wq = w[op.a + q], wf = w[op.anc + q];
          w[op.a + q] = t * wq - u * wf;
          w[op.anc + q] = u * wq + t * wf;
        }
        break;
      }
    }
  }
}

PulseOracle::Row PulseOracle::output_row(const Eigen::VectorXd& functional) const {
  const int phys = 2 * (n_ + 1);
  if (functional.size() != phys)
    throw std::invalid_argument("output_row: functional must cover atoms + N slices");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n_coords_);
  w.head(phys) = functional;
  adjoint_sweep(w);
  Row row;
  row.atoms = w.head<2>();
  row.light = w.segment(2, 2 * n_);
  row.ancilla = w.tail(n_coords_ - phys);
  return row;
}

PulseOracle::Row PulseOracle::atom_row(int quad) const {
  if (quad != 0 && quad != 1) throw std::invalid_argument("atom_row: quad is 0 or 1");
  Eigen::VectorXd f = Eigen::VectorXd::Zero(2 * (n_ + 1));
  f[quad] = 1.0;
  return output_row(f);
}

PulseOracle::Row PulseOracle::mode_row(const ModeEnvelope& env, int quad) const {
  if (quad != 0 && quad != 1) throw std::invalid_argument("mode_row: quad is 0 or 1");
  Eigen::VectorXd f = Eigen::VectorXd::Zero(2 * (n_ + 1));
  f.segment(2, 2 * n_) = quad == 0 ? mode_x_row(env, n_) : mode_p_row(env, n_);
  return output_row(f);
}

double PulseOracle::channel_power(const Row& row, AncillaChannel channel) const {
  if (row.ancilla.size() != static_cast<Eigen::Index>(channels_.size()))
    throw std::invalid_argument("channel_power: row from a different integrator");
  double power = 0.0;
  for (std::size_t j = 0; j < channels_.size(); ++j)
    if (channels_[j] == channel) power += row.ancilla[j] * row.ancilla[j];
  return power;
}

namespace {

LinearIOMap traced_map(const PulseOracle& oracle) {
  const int n = oracle.n_slices();
  const int dim = 2 * (n + 1);
  const int na = oracle.n_ancillas();
  LinearIOMap map;
  map.S.resize(dim, dim);
  map.d = Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd anc(dim, na);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    f[i] = 1.0;
    const PulseOracle::Row row = oracle.output_row(f);
    f[i] = 0.0;
    map.S(i, 0) = row.atoms[0];
    map.S(i, 1) = row.atoms[1];
    map.S.row(i).segment(2, 2 * n) = row.light;
    anc.row(i) = row.ancilla;
  }
  map.Y = na > 0 ? Eigen::MatrixXd(0.5 * anc * anc.transpose())
                 : Eigen::MatrixXd::Zero(dim, dim);
  map.in_labels.reserve(n + 1);
  map.in_labels.emplace_back("atoms");
  for (int k = 0; k < n; ++k) map.in_labels.emplace_back("slice " + std::to_string(k));
  map.out_labels = map.in_labels;
  return map;
}

}  // namespace

LinearIOMap integrate_ideal(const ProtocolParams& params) {
  if (params.eta != 0.0 || params.r != 0.0)
    throw std::invalid_argument(
        "integrate_ideal: eta and r must be zero (use integrate_noisy)");
  return traced_map(PulseOracle(params));
}

LinearIOMap integrate_noisy(const ProtocolParams& params) {
  return traced_map(PulseOracle(params));
}

Eigen::Vector3d project_mode(const LinearIOMap& map, const ModeEnvelope& env) {
  if (map.S.rows() != map.S.cols() || map.S.rows() < 4 || map.S.rows() % 2 != 0)
    throw std::invalid_argument("project_mode: need a square atoms + slices map");
  const int n = static_cast<int>(map.S.rows()) / 2 - 1;
  const Eigen::VectorXd light = map.S.row(0).segment(2, 2 * n);
  const double cx = light.dot(mode_x_row(env, n));
  const double cp = light.dot(mode_p_row(env, n));
  const double mode_coeff = env.sideband == Sideband::upper ? cx : cp;
  const double rest2 = light.squaredNorm() - cx * cx - cp * cp;
  return {map.S(0, 0), mode_coeff, std::sqrt(std::max(0.0, rest2))};
}

}  // namespace doublepass
