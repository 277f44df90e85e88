#include "doublepass/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace doublepass {

MatrixXd symplectic_form(int n_modes) {
  MatrixXd sigma = MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int m = 0; m < n_modes; ++m) {
    sigma(2 * m, 2 * m + 1) = 1.0;
    sigma(2 * m + 1, 2 * m) = -1.0;
  }
  return sigma;
}

int GaussianState::find_mode(const std::string& label) const {
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return -1;
}

GaussianState make_vacuum(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("make_vacuum: n_modes must be >= 1");
  GaussianState s;
  s.means = VectorXd::Zero(2 * n_modes);
  s.cov = 0.5 * MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  return s;
}

GaussianState make_vacuum(const std::vector<std::string>& labels) {
  GaussianState s = make_vacuum(static_cast<int>(labels.size()));
  s.labels = labels;
  return s;
}

double physicality_margin(const MatrixXd& cov) {
  const int dim = static_cast<int>(cov.rows());
  Eigen::MatrixXcd h = cov.cast<std::complex<double>>();
  h += std::complex<double>(0.0, 0.5) * symplectic_form(dim / 2).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_physical(const GaussianState& state, double tol) {
  if (state.cov.rows() != state.cov.cols() ||
      state.cov.rows() != state.means.size())
    return false;
  if ((state.cov - state.cov.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  return physicality_margin(state.cov) >= -tol;
}

LinearIOMap identity_map(int n_modes) {
  LinearIOMap m;
  m.S = MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  m.d = VectorXd::Zero(2 * n_modes);
  m.Y = MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  return m;
}

LinearIOMap make_map(const MatrixXd& S, std::vector<std::string> in_labels,
                     std::vector<std::string> out_labels) {
  LinearIOMap m;
  m.S = S;
  m.d = VectorXd::Zero(S.rows());
  m.Y = MatrixXd::Zero(S.rows(), S.rows());
  m.in_labels = std::move(in_labels);
  m.out_labels = std::move(out_labels);
  return m;
}

GaussianState apply_map(const GaussianState& state, const LinearIOMap& map) {
  if (map.S.cols() != state.means.size())
    throw std::invalid_argument("apply_map: dimension mismatch");
  GaussianState out;
  out.means = map.S * state.means + map.d;
  out.cov = map.S * state.cov * map.S.transpose() + map.Y;
  out.labels = map.out_labels.empty() && map.n_out() == state.n_modes()
                   ? state.labels
                   : map.out_labels;
  return out;
}

LinearIOMap compose(const LinearIOMap& second, const LinearIOMap& first) {
  if (second.S.cols() != first.S.rows())
    throw std::invalid_argument("compose: dimension mismatch");
  LinearIOMap m;
  m.S = second.S * first.S;
  m.d = second.S * first.d + second.d;
  m.Y = second.S * first.Y * second.S.transpose() + second.Y;
  m.in_labels = first.in_labels;
  m.out_labels = second.out_labels.empty() ? first.out_labels : second.out_labels;
  return m;
}

LinearIOMap embed_map(const LinearIOMap& map, int n_modes,
                      const std::vector<int>& modes) {
  if (static_cast<int>(modes.size()) != map.n_in() || map.n_in() != map.n_out())
    throw std::invalid_argument("embed_map: needs a square map with one slot per mode");
  for (int slot : modes)
    if (slot < 0 || slot >= n_modes)
      throw std::invalid_argument("embed_map: mode slot out of range");
  LinearIOMap m = identity_map(n_modes);
  for (size_t i = 0; i < modes.size(); ++i)
    for (size_t j = 0; j < modes.size(); ++j)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          m.S(2 * modes[i] + a, 2 * modes[j] + b) = map.S(2 * i + a, 2 * j + b);
          m.Y(2 * modes[i] + a, 2 * modes[j] + b) = map.Y(2 * i + a, 2 * j + b);
        }
  for (size_t i = 0; i < modes.size(); ++i)
    for (int a = 0; a < 2; ++a) m.d(2 * modes[i] + a) = map.d(2 * i + a);
  return m;
}

double symplectic_residual(const MatrixXd& S) {
  if (S.rows() != S.cols())
    throw std::invalid_argument("symplectic_residual: square S required");
  const MatrixXd sigma = symplectic_form(static_cast<int>(S.rows()) / 2);
  return (S.transpose() * sigma * S - sigma).cwiseAbs().maxCoeff();
}

double channel_physicality_margin(const LinearIOMap& map) {
  const MatrixXd sigma_in = symplectic_form(map.n_in());
  const MatrixXd sigma_out = symplectic_form(map.n_out());
  Eigen::MatrixXcd h = map.Y.cast<std::complex<double>>();
  h += std::complex<double>(0.0, 0.5) *
       (sigma_out - map.S * sigma_in * map.S.transpose()).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool check_symplectic(const LinearIOMap& map, double tol, double phys_tol) {
  if (map.S.rows() != map.S.cols()) return false;
  if (symplectic_residual(map.S) > tol) return false;
  return channel_physicality_margin(map) >= -phys_tol;
}

double epr_variance(const GaussianState& state, int mode_a, int mode_b) {
  const int n = state.n_modes();
  if (mode_a < 0 || mode_a >= n || mode_b < 0 || mode_b >= n || mode_a == mode_b)
    throw std::invalid_argument("epr_variance: invalid mode pair");
  // u1 = (x_a - p_b)/sqrt(2), u2 = (p_a - x_b)/sqrt(2)
  VectorXd u1 = VectorXd::Zero(2 * n), u2 = VectorXd::Zero(2 * n);
  const double isq2 = 1.0 / std::sqrt(2.0);
  u1(2 * mode_a) = isq2;
  u1(2 * mode_b + 1) = -isq2;
  u2(2 * mode_a + 1) = isq2;
  u2(2 * mode_b) = -isq2;
  return u1.dot(state.cov * u1) + u2.dot(state.cov * u2);
}

double epr_variance(const GaussianState& state, const std::string& mode_a,
                    const std::string& mode_b) {
  const int a = state.find_mode(mode_a), b = state.find_mode(mode_b);
  if (a < 0 || b < 0) throw std::invalid_argument("epr_variance: unknown mode label");
  return epr_variance(state, a, b);
}

}  // namespace doublepass
