#include "doublepass/validate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>

#include <Eigen/Dense>

#include "doublepass/envelope.hpp"
#include "doublepass/epr.hpp"
#include "doublepass/fidelity.hpp"
#include "doublepass/memory.hpp"
#include "doublepass/noise.hpp"
#include "doublepass/optimize.hpp"
#include "doublepass/oracle.hpp"
#include "doublepass/params.hpp"

namespace doublepass {

namespace {

struct Harness {
  ValidationReport report;
  int n_segments;
  double omega_T;
  bool corrupt;

  ProtocolParams protocol(double k2, double eta, double r, Setup setup) const {
    ProtocolParams p;
    p.kappa2 = k2;
    p.eta = eta;
    p.r = r;
    p.setup = setup;
    p.n_segments = n_segments;
    p.omega_T = omega_T;
    return p;
  }

  void add(const std::string& name, double deviation, double tolerance) {
    ValidationCheck c{name, deviation, tolerance,
                      std::abs(deviation) <= tolerance};
    if (!c.pass && report.all_pass) {
      report.all_pass = false;
      report.first_failure = name;
    }
    report.checks.push_back(std::move(c));
  }
};

Eigen::VectorXd full_row(const PulseOracle::Row& r) {
  Eigen::VectorXd v(2 + r.light.size() + r.ancilla.size());
  v << r.atoms, r.light, r.ancilla;
  return v;
}

double bundle_coef(const NoisyIOBundle& b, const std::string& label) {
  const int i = b.find_mode(label);
  return i < 0 ? 0.0 : b.S(0, 2 * i);
}

// max |oracle - closed form| over the four ideal I/O coefficients of one
// setup at one coupling
double ideal_write_dev(const Harness& h, double k2) {
  const ProtocolParams p = h.protocol(k2, 0.0, 0.0, Setup::memory);
  PulseOracle oracle(p);
  const PulseOracle::Row wx = oracle.atom_row(0);
  const Eigen::VectorXd v_usp =
      mode_x_row(plus_mode(k2, p.omega_T, Sideband::upper), p.n_segments);
  const LinearIOMap map = write_in_map(k2);
  return std::max(std::abs(wx.atoms[0] - map.S(0, 0)),
                  std::abs(wx.light.dot(v_usp) - map.S(0, 2)));
}

double ideal_read_dev(const Harness& h, double k2) {
  const ProtocolParams p = h.protocol(k2, 0.0, 0.0, Setup::memory);
  PulseOracle oracle(p);
  const PulseOracle::Row out =
      oracle.mode_row(minus_mode(k2, p.omega_T, Sideband::upper), 0);
  const Eigen::VectorXd v_usp =
      mode_x_row(plus_mode(k2, p.omega_T, Sideband::upper), p.n_segments);
  LinearIOMap map = read_out_map(k2);
  // negative control: plant the classic retrieval sign error
  if (h.corrupt) map.S(4, 0) = -map.S(4, 0);
  return std::max(std::abs(out.atoms[0] - map.S(4, 0)),
                  std::abs(out.light.dot(v_usp) - map.S(4, 2)));
}

double ideal_squeezer_dev(const Harness& h, double k2) {
  const ProtocolParams p = h.protocol(k2, 0.0, 0.0, Setup::squeezer);
  PulseOracle oracle(p);
  const PulseOracle::Row fx = oracle.atom_row(0);
  const Eigen::VectorXd v_lsm =
      mode_p_row(minus_mode(k2, p.omega_T, Sideband::lower), p.n_segments);
  const double e = std::exp(0.5 * k2);
  const double s = std::sqrt(std::expm1(k2));
  return std::max(std::abs(fx.atoms[0] - e),
                  std::abs(fx.light.dot(v_lsm) - s));
}

double noisy_memory_dev(const Harness& h, double k2, double eta, double r) {
  const ProtocolParams p = h.protocol(k2, eta, r, Setup::memory);
  const double w = p.wt();
  PulseOracle oracle(p);
  const int n = p.n_segments;
  const Eigen::VectorXd v_usp =
      mode_x_row(plus_mode(w, p.omega_T, Sideband::upper), n);
  const Eigen::VectorXd v_usm =
      mode_x_row(minus_mode(w, p.omega_T, Sideband::upper), n);
  const Eigen::VectorXd v_lsp =
      mode_p_row(plus_mode(w, p.omega_T, Sideband::lower), n);
  const Eigen::VectorXd v_lsm =
      mode_p_row(minus_mode(w, p.omega_T, Sideband::lower), n);

  double dev = 0.0;
  const PulseOracle::Row wx = oracle.atom_row(0);
  const NoisyIOBundle wb = noisy_write_in(p);
  Eigen::Matrix2d g2;
  g2 << v_usp.squaredNorm(), v_usp.dot(v_lsp), v_usp.dot(v_lsp),
      v_lsp.squaredNorm();
  const Eigen::Vector2d cw = g2.ldlt().solve(
      Eigen::Vector2d(wx.light.dot(v_usp), wx.light.dot(v_lsp)));
  dev = std::max(dev, std::abs(bundle_coef(wb, "atoms in") - wx.atoms[0]));
  dev = std::max(dev, std::abs(bundle_coef(wb, "write-pulse us+") - cw[0]));
  dev = std::max(dev, std::abs(bundle_coef(wb, "write-pulse ls+") - cw[1]));

  const NoisyIOBundle rb = noisy_read_out(p);
  const PulseOracle::Row rx =
      oracle.mode_row(minus_mode(w, p.omega_T, Sideband::upper), 0);
  Eigen::Matrix4d g4;
  Eigen::Vector4d b4;
  const Eigen::VectorXd* vs[4] = {&v_usp, &v_usm, &v_lsp, &v_lsm};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) g4(i, j) = vs[i]->dot(*vs[j]);
    b4[i] = rx.light.dot(*vs[i]);
  }
  const Eigen::Vector4d cr = g4.ldlt().solve(b4);
  const char* labels[4] = {"read-pulse us+", "read-pulse us-",
                           "read-pulse ls+", "read-pulse ls-"};
  dev = std::max(dev, std::abs(bundle_coef(rb, "atoms in") - rx.atoms[0]));
  for (int i = 0; i < 4; ++i)
    dev = std::max(dev, std::abs(bundle_coef(rb, labels[i]) - cr[i]));
  dev = std::max(dev, std::abs(rb.out_covariance()(0, 0) -
                               0.5 * full_row(rx).squaredNorm()));
  return dev;
}

double noisy_squeezer_dev(const Harness& h, double k2, double eta, double r) {
  const ProtocolParams p = h.protocol(k2, eta, r, Setup::squeezer);
  PulseOracle oracle(p);
  const ModeEnvelope env =
      plus_mode(p.squeezer_wt(), p.omega_T, Sideband::lower);
  const Eigen::VectorXd fx = full_row(oracle.atom_row(0));
  const Eigen::VectorXd fp = full_row(oracle.atom_row(1));
  const Eigen::VectorXd mX = full_row(oracle.mode_row(env, 0));
  const Eigen::VectorXd mP = full_row(oracle.mode_row(env, 1));
  const double delta_o =
      0.25 * ((fx - mP).squaredNorm() + (fp - mX).squaredNorm());
  const SqueezerMoments m = noisy_squeezer_moments(p);
  const double delta_c = m.var_atom + m.var_light - 2.0 * m.cross;
  double dev = std::abs(delta_c - delta_o) / delta_o;
  dev = std::max(dev, std::abs(m.cross - 0.5 * fx.dot(mP)));
  return dev;
}

std::string minus_mode_diagnostic(const Harness& h) {
  const ProtocolParams p = h.protocol(1.0, 0.1, 0.1, Setup::memory);
  const double w = p.wt();
  PulseOracle oracle(p);
  const auto retrieval = [&](double rate) {
    return std::abs(
        oracle.mode_row(minus_mode(rate, p.omega_T, Sideband::upper), 0)
            .atoms[0]);
  };
  const double chosen = retrieval(w);
  double best_in_family = 0.0;
  for (int i = 0; i <= 40; ++i)
    best_in_family = std::max(best_in_family, retrieval(w * (0.5 + 0.025 * i)));

  // matched-filter bound: norm of the atoms -> output-light column, i.e. the
  // retrieval the exact (non-exponential) inverse mode would reach
  const int n = p.n_segments;
  double col2 = 0.0;
  Eigen::VectorXd functional = Eigen::VectorXd::Zero(2 + 2 * n);
  for (int k = 0; k < 2 * n; ++k) {
    functional[2 + k] = 1.0;
    const double c = oracle.output_row(functional).atoms[0];
    functional[2 + k] = 0.0;
    col2 += c * c;
  }
  const double matched = std::sqrt(col2);
  char buf[300];
  std::snprintf(buf, sizeof buf,
                "generalized minus-mode retrieval at kappa2=1, eta=r=0.1: "
                "|atom coefficient| %.6f at rate w=%.4f; best single-rate "
                "envelope %.6f; matched-filter bound %.6f (penalty %.2e; "
                "diagnostic only)",
                chosen, w, best_in_family, matched,
                (matched - chosen) / matched);
  return buf;
}

}  // namespace

ValidationReport run_validation(const ValidationOptions& options) {
  Harness h;
  h.n_segments = options.full ? 8000 : 1000;
  h.omega_T = 2.0 * M_PI * (options.full ? 100.0 : 50.0);
  h.corrupt = options.corrupt_readout_sign;

  const double tol_ideal = options.full ? 5e-3 : 2e-2;
  const double tol_noisy = options.full ? 1e-2 : 2e-2;
  const std::vector<double> couplings = {0.5, 1.0, 2.0};

  {
    double dev = 0.0;
    for (double k2 : couplings) dev = std::max(dev, ideal_write_dev(h, k2));
    h.add("ideal write-in coefficients vs integrator", dev, tol_ideal);
  }
  {
    double dev = 0.0;
    for (double k2 : couplings) dev = std::max(dev, ideal_read_dev(h, k2));
    h.add("ideal read-out coefficients vs integrator", dev, tol_ideal);
  }
  {
    double dev = 0.0;
    for (double k2 : couplings) dev = std::max(dev, ideal_squeezer_dev(h, k2));
    h.add("ideal squeezer coefficients vs integrator", dev, tol_ideal);
  }
  h.add("noisy memory bundle vs integrator (eta=r=0.1, kappa2=1)",
        noisy_memory_dev(h, 1.0, 0.1, 0.1), tol_noisy);
  h.add("noisy squeezer moments vs integrator (eta=r=0.1, kappa2=1)",
        noisy_squeezer_dev(h, 1.0, 0.1, 0.1), tol_noisy);

  {
    double dev = 0.0;
    for (double k2 : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      dev = std::max(dev, symplectic_residual(write_in_map(k2).S));
      dev = std::max(dev, symplectic_residual(read_out_map(k2).S));
      dev = std::max(dev, symplectic_residual(complete_transfer_map(k2).S));
      dev = std::max(dev, symplectic_residual(squeezer_maps(k2).S));
    }
    h.add("lossless maps are symplectic", dev, 1e-10);
  }
  {
    double defect = 0.0;
    double floor_violation = 0.0;
    for (double k2 : couplings) {
      for (double eta : {0.05, 0.1, 0.25}) {
        for (double r : {0.05, 0.1, 0.25}) {
          const ProtocolParams p = h.protocol(k2, eta, r, Setup::memory);
          for (const NoisyIOBundle& b :
               {noisy_write_in(p), noisy_read_out(p),
                noisy_complete_transfer(p)}) {
            defect = std::max(defect, b.commutator_defect());
            floor_violation = std::max(
                floor_violation, 0.25 - b.out_covariance().determinant());
          }
        }
      }
    }
    h.add("noisy bundles preserve commutators", defect, 1e-9);
    h.add("noisy outputs respect the uncertainty floor", floor_violation,
          1e-9);
  }
  {
    double dev = 0.0;
    for (double k2 : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      const double z = std::acosh(std::exp(0.5 * k2));
      dev = std::max(dev,
                     std::abs(epr_variances(k2).first - std::exp(-2.0 * z)));
      const FeedbackResult fb = spin_squeeze(k2, optimal_gain(k2));
      dev = std::max(dev, std::abs(fb.var_p_fb * fb.var_x - 0.25));
    }
    h.add("EPR identity and uncertainty product at optimal gain", dev, 1e-12);
  }
  {
    double dev = 0.0;
    for (double k2 : {0.5, 1.0, 2.0, 3.0}) {
      const MinResult m = polished_minimize(
          [&](double g) { return spin_squeeze(k2, g).var_p_fb; }, 0.0, 2.0,
          1e-8);
      dev = std::max(dev, std::abs(m.x - optimal_gain(k2)));
    }
    h.add("closed-form optimal gain vs numeric minimizer", dev, 1e-8);
  }
  {
    double dev = 0.0;
    for (double k2 : couplings) {
      ProtocolParams p;
      p.kappa2 = k2;
      const NoisyIOBundle wb = noisy_write_in(p);
      const LinearIOMap wm = write_in_map(k2);
      dev = std::max(dev, std::abs(bundle_coef(wb, "atoms in") - wm.S(0, 0)));
      dev = std::max(
          dev, std::abs(bundle_coef(wb, "write-pulse us+") - wm.S(0, 2)));
      const NoisyIOBundle rb = noisy_read_out(p);
      dev = std::max(dev,
                     std::abs(rb.c[0] + std::sqrt(-std::expm1(-k2))));
      dev = std::max(dev, std::abs(rb.c[1] - std::exp(-0.5 * k2)));
      for (int i = 2; i < 9; ++i) dev = std::max(dev, std::abs(rb.c[i]));
      dev = std::max(dev, std::abs(noisy_coherent_fidelity(p, 8.0) -
                                   1.0 / (1.0 + 8.0 * std::exp(-2.0 * k2))));
      p.setup = Setup::squeezer;
      dev = std::max(dev, std::abs(noisy_epr_and_squeezing(p).delta_epr -
                                   epr_variances(k2).first));
    }
    h.add("noise channels reduce to the lossless maps", dev, 1e-12);
  }
  {
    const double closed = 1.0 - std::exp(-1.0) + std::exp(-2.0) / 3.0;
    const double quad = bloch_average([](std::complex<double> a,
                                         std::complex<double> b) {
      return qubit_overlap(a, b, 1.0);
    });
    h.add("Bloch quadrature matches the closed-form qubit average",
          std::abs(quad - closed), 1e-6);
  }
  {
    const double n = 8.0, k2 = 1.0;
    const double closed = 1.0 / (1.0 + n * std::exp(-2.0 * k2));
    std::mt19937_64 rng(0x5eed0001u);
    std::normal_distribution<double> gauss(0.0, std::sqrt(n));
    const double k1 = std::expm1(-k2);  // retrieval carries the minus sign
    const int samples = 100000;
    double sum = 0.0, sum2 = 0.0;
    const Eigen::Vector2d var(0.5, 0.5);
    for (int i = 0; i < samples; ++i) {
      const Eigen::Vector2d in(gauss(rng), gauss(rng));
      const double f = coherent_overlap(in, k1 * in, var);
      sum += f;
      sum2 += f * f;
    }
    const double mean = sum / samples;
    const double se =
        std::sqrt((sum2 / samples - mean * mean) / (samples - 1.0));
    h.add("Monte-Carlo coherent ensemble vs closed form",
          std::abs(mean - closed), 3.0 * se);
  }

  h.report.diagnostics.push_back(minus_mode_diagnostic(h));
  return h.report;
}

}  // namespace doublepass
