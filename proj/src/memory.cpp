#include "doublepass/memory.hpp"

#include <cmath>
#include <stdexcept>

namespace doublepass {

namespace {
void put_block(MatrixXd& S, int row_mode, int col_mode, double xx, double xp,
               double px, double pp) {
  S(2 * row_mode, 2 * col_mode) = xx;
  S(2 * row_mode, 2 * col_mode + 1) = xp;
  S(2 * row_mode + 1, 2 * col_mode) = px;
  S(2 * row_mode + 1, 2 * col_mode + 1) = pp;
}
}  // namespace

LinearIOMap write_in_map(double kappa2) {
  if (kappa2 < 0.0) throw std::invalid_argument("write_in_map: kappa2 must be >= 0");
  const double e = std::exp(-kappa2 / 2.0);
  const double s = std::sqrt(-std::expm1(-kappa2));
  MatrixXd S = MatrixXd::Zero(4, 4);
  put_block(S, 0, 0, e, 0, 0, e);
  put_block(S, 0, 1, s, 0, 0, s);
  put_block(S, 1, 0, -s, 0, 0, -s);
  put_block(S, 1, 1, e, 0, 0, e);
  return make_map(S, {"atoms", "L+"}, {"atoms", "L+"});
}

LinearIOMap read_out_map(double kappa2) {
  if (kappa2 < 0.0) throw std::invalid_argument("read_out_map: kappa2 must be >= 0");
  const double e = std::exp(-kappa2 / 2.0);
  const double s = std::sqrt(-std::expm1(-kappa2));
  MatrixXd S = MatrixXd::Zero(6, 6);
  put_block(S, 0, 0, e, 0, 0, e);   // atoms damp and absorb the read pulse
  put_block(S, 0, 1, s, 0, 0, s);
  put_block(S, 1, 2, 1, 0, 0, 1);   // completion: L+ slot carries L- through
  put_block(S, 2, 0, -s, 0, 0, -s); // retrieved signal
  put_block(S, 2, 1, e, 0, 0, e);
  const std::vector<std::string> labels = {"atoms", "readout L+", "readout L-"};
  return make_map(S, labels, labels);
}

LinearIOMap complete_transfer_map(double kappa2) {
  // mode order {input L+, atoms, readout L+, readout L-}
  const LinearIOMap win = embed_map(write_in_map(kappa2), 4, {1, 0});
  const LinearIOMap rout = embed_map(read_out_map(kappa2), 4, {1, 2, 3});
  LinearIOMap m = compose(rout, win);
  m.in_labels = m.out_labels = {"input L+", "atoms", "readout L+", "readout L-"};
  return m;
}

}  // namespace doublepass
