#include "doublepass/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "doublepass/optimize.hpp"

namespace doublepass {

namespace {

// (e^x - 1)/x, continuous through 0
double expm1_over(double x) {
  if (std::abs(x) < 1e-7) return 1.0 + x / 2.0 + x * x / 6.0;
  return std::expm1(x) / x;
}

// overlap of the growing/decaying envelope pair at exponent x: (x/2)/sinh(x/2)
double pair_overlap(double x) {
  if (std::abs(x) < 1e-7) return 1.0 - x * x / 24.0;
  return (x / 2.0) / std::sinh(x / 2.0);
}

// ((e^x-1)/x - 1)/x -> 1/2
double r1_coeff(double x) {
  if (std::abs(x) < 1e-6) return 0.5 + x / 6.0;
  return (std::expm1(x) - x) / (x * x);
}

// (x e^x - (e^x-1)) / (x (e^x-1)) -> 1/2
double q_coeff(double x) {
  if (std::abs(x) < 1e-6) return 0.5 + x / 12.0;
  return (x * std::exp(x) - std::expm1(x)) / (x * std::expm1(x));
}

Eigen::Matrix2d j2() {
  Eigen::Matrix2d j;
  j << 0.0, 1.0, -1.0, 0.0;
  return j;
}

struct ModeCoef {
  BundleMode mode;
  double coef = 0.0;
};

NoisyIOBundle assemble(std::vector<ModeCoef> entries,
                       std::vector<double> overlaps, std::string out_label) {
  NoisyIOBundle b;
  const int m = static_cast<int>(entries.size());
  b.S = Eigen::MatrixXd::Zero(2, 2 * m);
  b.Y = Eigen::Matrix2d::Zero();
  b.Yc = Eigen::Matrix2d::Zero();
  b.family_overlap = std::move(overlaps);
  b.out_label = std::move(out_label);
  for (int i = 0; i < m; ++i) {
    b.modes.push_back(std::move(entries[i].mode));
    b.S.block<2, 2>(0, 2 * i) = entries[i].coef * Eigen::Matrix2d::Identity();
  }
  return b;
}

// All read-out quantities before the final wall. Envelope functions are over
// t in [0,1]; env9(t) = E e^{wt/2} - e^{-wt/2} is the kernel the second-pass
// noise acquires on its way through the atoms.
struct ReadOutCoeffs {
  double w = 0.0, E = 1.0, s2w = 1.0, lam = 1.0;
  double K = 0.0, P = 0.0, Mm = 1.0;
  double J = 0.0;   // int e^{-wt/2} env9 = E - s2w  (<= 0)
  double n9 = 0.0;  // ||env9||^2 = s2w(1+E) - 2E
  double p1 = 0.0, p2 = 0.0, p3 = 0.0, p4 = 0.0, p5 = 0.0, p6 = 0.0;
  double p8 = 0.0, p9 = 0.0;
  double c8eff = 0.0;   // p8 + projection of the p9 kernel on the p8 mode
  double y_left = 0.0;  // per-quadrature residual variance after projection
  double yc_left = 0.0; // residual commutator weight (negative, active-type)
};

ReadOutCoeffs read_out_coeffs(const ProtocolParams& q) {
  ReadOutCoeffs o;
  const double k2 = q.kappa2, eta = q.eta, r = q.r;
  o.w = q.wt();
  o.E = std::exp(-o.w);
  o.s2w = expm1_over(-o.w);
  o.lam = pair_overlap(o.w);
  o.Mm = 1.0 / std::sqrt(o.s2w);
  if (std::abs(o.w) < 1e-6) {
    o.J = -o.w / 2.0 + o.w * o.w / 3.0;
    o.n9 = o.w * o.w / 3.0 - o.w * o.w * o.w / 3.0;
  } else {
    o.J = (std::expm1(-o.w) + o.w * o.E) / o.w;
    o.n9 = (-std::expm1(-2.0 * o.w) - 2.0 * o.w * o.E) / o.w;
  }
  const double root = std::sqrt(1.0 - 2.0 * r);
  const double kt = std::sqrt(k2) * root;
  if (k2 > 0.0) {  // w >= k2(1-2r) > 0, the ratios are finite
    o.K = k2 * root / o.w;
    o.P = k2 * (1.0 - 2.0 * r) / o.w;
  }
  o.p1 = -kt * std::sqrt(o.s2w);
  o.p2 = o.K * (1.0 - r) * std::sqrt(o.E);
  o.p3 = o.K * r * std::sqrt(o.E);
  o.p4 = root - o.K * (1.0 - r);
  o.p5 = -o.K * r;
  o.p6 = eta > 0.0 ? -(kt * std::sqrt(eta) / o.w) * o.Mm * std::sqrt(o.n9)
                   : 0.0;
  o.p8 = std::sqrt(2.0 * r);
  o.p9 = o.P * std::sqrt(2.0 * r) * o.Mm;
  const double mj = o.Mm * o.J;
  o.c8eff = o.p8 + 0.5 * o.p9 * mj;
  o.y_left = 0.25 * o.p9 * o.p9 * o.n9 - 0.125 * o.p9 * o.p9 * mj * mj;
  o.yc_left = -0.25 * o.p9 * o.p9 * mj * mj;
  return o;
}

}  // namespace

double generalized_exponent(const ProtocolParams& params) {
  return params.setup == Setup::squeezer ? params.squeezer_wt() : params.wt();
}

int NoisyIOBundle::find_mode(const std::string& label) const {
  for (int i = 0; i < n_modes(); ++i)
    if (modes[i].label == label) return i;
  return -1;
}

Eigen::MatrixXd NoisyIOBundle::gram() const {
  const int m = n_modes();
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2 * m, 2 * m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      if (modes[i].family < 0 || modes[i].family != modes[j].family) continue;
      if (modes[i].swapped != modes[j].swapped)
        throw std::logic_error("bundle family mixes swapped orders");
      const double lam = family_overlap.at(modes[i].family);
      g.block<2, 2>(2 * i, 2 * j) = lam * Eigen::Matrix2d::Identity();
      g.block<2, 2>(2 * j, 2 * i) = lam * Eigen::Matrix2d::Identity();
    }
  return g;
}

Eigen::MatrixXd NoisyIOBundle::comm() const {
  const int m = n_modes();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    const double si = modes[i].swapped ? -1.0 : 1.0;
    c.block<2, 2>(2 * i, 2 * i) = si * j2();
    for (int j = i + 1; j < m; ++j) {
      if (modes[i].family < 0 || modes[i].family != modes[j].family) continue;
      if (modes[i].swapped != modes[j].swapped)
        throw std::logic_error("bundle family mixes swapped orders");
      const double lam = family_overlap.at(modes[i].family);
      c.block<2, 2>(2 * i, 2 * j) = si * lam * j2();
      c.block<2, 2>(2 * j, 2 * i) = si * lam * j2();
    }
  }
  return c;
}

Eigen::MatrixXd NoisyIOBundle::out_covariance() const {
  return S * (0.5 * gram()) * S.transpose() + Y;
}

Eigen::MatrixXd NoisyIOBundle::out_commutator() const {
  return S * comm() * S.transpose() + Yc;
}

double NoisyIOBundle::commutator_defect() const {
  return (out_commutator() - j2()).cwiseAbs().maxCoeff();
}

NoisyIOBundle noisy_write_in(const ProtocolParams& params) {
  params.validate();
  const double k2 = params.kappa2, eta = params.eta, r = params.r;
  const double w = params.wt();
  const double E = std::exp(-w);
  const double s2w = expm1_over(-w);
  const double a1 = std::sqrt(E);
  const double a2 = std::sqrt(k2) * (1.0 - r) * std::sqrt(s2w);
  const double a3 = std::sqrt(k2) * r * std::sqrt(s2w);
  const double a6 = std::sqrt(eta * s2w);
  const double resid = std::sqrt(2.0 * k2 * r * (1.0 - 2.0 * r) * s2w);

  NoisyIOBundle b = assemble(
      {
          {{"atoms in", -1, 0, false}, a1},
          {{"write-pulse us+", -1, +1, false}, a2},
          {{"write-pulse ls+", -1, +1, true}, a3},
          {{"atomic noise", -1, 0, false}, a6},
      },
      {}, "atoms out");
  b.Y = 0.25 * resid * resid * Eigen::Matrix2d::Identity();
  b.c = Eigen::VectorXd(5);
  b.c << a1, a2, a3, a6, resid;
  return b;
}

NoisyIOBundle noisy_read_out(const ProtocolParams& params) {
  params.validate();
  const double r = params.r;
  const ReadOutCoeffs o = read_out_coeffs(params);
  const double t = std::sqrt(1.0 - r);  // final-wall transmission

  NoisyIOBundle b = assemble(
      {
          {{"atoms in", -1, 0, false}, t * o.p1},
          {{"read-pulse us+", 0, +1, false}, t * o.p2},
          {{"read-pulse us-", 0, -1, false}, t * o.p4},
          {{"read-pulse ls+", 1, +1, true}, t * o.p3},
          {{"read-pulse ls-", 1, -1, true}, t * o.p5},
          {{"atomic noise", -1, 0, false}, t * o.p6},
          {{"mid-wall noise", -1, 0, false}, t * o.c8eff},
          {{"exit-wall noise", -1, 0, false}, std::sqrt(r)},
      },
      {o.lam, o.lam}, "retrieved us- mode");
  b.Y = (1.0 - r) * o.y_left * Eigen::Matrix2d::Identity();
  b.Yc = (1.0 - r) * o.yc_left * j2();
  b.c = Eigen::VectorXd(9);
  b.c << t * o.p1, t * o.p2, t * o.p3, t * o.p4, t * o.p5, t * o.p6,
      std::sqrt(r), t * o.p8, t * o.p9;
  return b;
}

NoisyIOBundle noisy_complete_transfer(const ProtocolParams& params) {
  const NoisyIOBundle w = noisy_write_in(params);
  const NoisyIOBundle rd = noisy_read_out(params);
  const double t1 = rd.S(0, 0);  // atom pickup of the read-out, final wall in
  const double r = params.r;

  const double k_sig = t1 * w.S(0, 2);
  std::vector<ModeCoef> entries;
  if (params.first_wall_loss) {
    entries.push_back({{"signal in", -1, +1, false},
                       std::sqrt(1.0 - r) * k_sig});
    entries.push_back({{"first-wall noise", -1, 0, false},
                       std::sqrt(r) * k_sig});
  } else {
    entries.push_back({{"signal in", -1, +1, false}, k_sig});
  }
  entries.push_back({{"atoms in", -1, 0, false}, t1 * w.S(0, 0)});
  entries.push_back({{"write-pulse ls+", -1, +1, true}, t1 * w.S(0, 4)});
  entries.push_back({{"write atomic noise", -1, 0, false}, t1 * w.S(0, 6)});
  for (int j = 1; j < rd.n_modes(); ++j) {  // read modes, atoms slot replaced
    BundleMode m = rd.modes[j];
    if (m.label.rfind("read", 0) != 0) m.label = "read " + m.label;
    entries.push_back({std::move(m), rd.S(0, 2 * j)});
  }

  NoisyIOBundle b =
      assemble(std::move(entries), rd.family_overlap, rd.out_label);
  b.Y = t1 * t1 * w.Y + rd.Y;
  b.Yc = rd.Yc;
  b.c = Eigen::VectorXd(b.n_modes());
  for (int j = 0; j < b.n_modes(); ++j) b.c(j) = b.S(0, 2 * j);
  return b;
}

BogoliubovDecomp bogoliubov_decompose(const NoisyIOBundle& bundle) {
  const Eigen::MatrixXd cm = bundle.out_commutator();
  const double comm = 0.5 * (cm(0, 1) - cm(1, 0));
  if (std::abs(comm - 1.0) > 1e-6)
    throw std::runtime_error(
        "noisy bundle violates the commutator identity: N_a^2 - N_c^2 = " +
        std::to_string(comm));
  const double total = bundle.out_covariance().trace();

  BogoliubovDecomp d;
  d.n_c = std::sqrt(std::max(0.0, (total - comm) / 2.0));
  d.n_a = std::sqrt((total + comm) / 2.0);
  d.weak_noise = d.n_c <= 0.3;

  const int sig = bundle.find_mode("signal in");
  if (sig >= 0) d.k.emplace_back(bundle.S(0, 2 * sig), 0.0);
  for (int j = 0; j < bundle.n_modes(); ++j) {
    if (j == sig) continue;
    const std::complex<double> kj(bundle.S(0, 2 * j), 0.0);
    if (bundle.modes[j].swapped)
      d.k_tilde.push_back(kj);
    else
      d.k.push_back(kj);
  }
  return d;
}

double noisy_qubit_fidelity(const BogoliubovDecomp& decomp,
                            std::complex<double> alpha,
                            std::complex<double> beta) {
  const double a2 = std::norm(alpha), b2 = std::norm(beta);
  if (std::abs(a2 + b2 - 1.0) > 1e-9)
    throw std::invalid_argument("qubit amplitudes must be normalized");
  if (decomp.k.empty()) throw std::invalid_argument("decomposition is empty");
  const double k1 = decomp.k.front().real();
  const double nc2 = decomp.n_c * decomp.n_c;
  const double amp = a2 - b2 * k1 * (1.0 - nc2 / std::sqrt(1.0 + nc2));
  return amp * amp / (1.0 + nc2);
}

FidelityReport noisy_average_qubit(const ProtocolParams& params) {
  ProtocolParams p = params;
  p.first_wall_loss = true;  // the incoming qubit crosses the first wall
  const BogoliubovDecomp d = bogoliubov_decompose(noisy_complete_transfer(p));

  FidelityReport rep;
  rep.average = bloch_average([&](std::complex<double> a,
                                  std::complex<double> b) {
    return noisy_qubit_fidelity(d, a, b);
  });
  const double inv = 1.0 / std::sqrt(2.0);
  rep.per_state = noisy_qubit_fidelity(d, inv, inv);
  rep.classical_limit = classical_limit_qubit();
  rep.beats_classical = rep.average > rep.classical_limit;
  return rep;
}

double noisy_coherent_fidelity(const ProtocolParams& params, double n) {
  if (!(n >= 0.0)) throw std::invalid_argument("ensemble width n must be >= 0");
  ProtocolParams p = params;
  p.first_wall_loss = false;  // ensemble referenced to the mode in the cell
  const NoisyIOBundle b = noisy_complete_transfer(p);
  const double gain = b.S(0, 2 * b.find_mode("signal in"));
  const Eigen::MatrixXd v = b.out_covariance();
  return average_coherent_from_io(gain, v(0, 0), v(1, 1), n);
}

SqueezerMoments noisy_squeezer_moments(const ProtocolParams& params) {
  params.validate();
  const double k2 = params.kappa2, eta = params.eta, r = params.r;
  const double sg = params.squeezer_wt();
  const double es2 = expm1_over(sg);
  const double g0 = std::exp(sg / 2.0);
  const double root = std::sqrt(1.0 - 2.0 * r);
  const double kt = std::sqrt(k2) * root;
  const double mp = 1.0 / std::sqrt(es2);
  const double q = q_coeff(sg);    // int e^{st/2} env9 / (es2 * s2)
  const double r1 = r1_coeff(sg);  // (es2 - 1)/sg
  // ||env9||^2 / sg^2 with env9(t) = e^s e^{-st/2} - e^{st/2}; -> 1/3
  const double nu2s2 = std::abs(sg) < 1e-4
                           ? 1.0 / 3.0 + sg / 6.0
                           : (std::expm1(2.0 * sg) - 2.0 * sg * std::exp(sg)) /
                                 (std::expm1(sg) * sg * sg);

  // atom pair
  const double a2 = std::sqrt(k2) * (1.0 - r) * std::sqrt(es2);
  const double a3 = std::sqrt(k2) * r * std::sqrt(es2);
  const double a6 = std::sqrt(eta * es2);
  const double enva2 = 2.0 * r * k2 * (1.0 - 2.0 * r) * es2;

  SqueezerMoments m;
  m.var_atom = 0.5 * (g0 * g0 + a2 * a2 + a3 * a3 + a6 * a6) + 0.25 * enva2;

  // retrieved plus mode, before the final wall
  const double c1 = kt * std::sqrt(es2);
  const double c6sq = kt * kt * eta * nu2s2;
  const double kn2 = k2 * k2 * (1.0 - 2.0 * r) * nu2s2;  // (K nu)^2
  const double gls = (1.0 - 2.0 * r) +
                     2.0 * (1.0 - r) * k2 * (1.0 - 2.0 * r) * q +
                     (1.0 - r) * (1.0 - r) * kn2;
  const double gus = r * r * kn2;
  const double vf = r + r * k2 * (1.0 - 2.0 * r) * q +
                    0.5 * r * k2 * k2 * (1.0 - 2.0 * r) * (1.0 - 2.0 * r) *
                        nu2s2;
  m.var_light = (1.0 - r) * (0.5 * (c1 * c1 + c6sq + gls + gus) + vf) +
                0.5 * r;

  // symmetrized cross covariance Cov(p_A', X~+') = Cov(x_A', P~+')
  const double term_at = 0.5 * g0 * c1;
  const double term_ls = 0.5 * std::sqrt(k2) * (1.0 - r) * mp * g0 *
                         (root + (1.0 - r) * k2 * root * r1);
  const double term_us =
      0.5 * std::sqrt(k2) * r * r * mp * g0 * k2 * root * r1;
  const double term_fa = 0.5 * kt * eta * mp * g0 * r1;
  const double term_f =
      0.5 * r * kt * mp * g0 * (1.0 + k2 * (1.0 - 2.0 * r) * r1);
  m.cross = std::sqrt(1.0 - r) *
            (term_at + term_ls + term_us + term_fa + term_f);
  return m;
}

NoisyEprResult noisy_epr_and_squeezing(const ProtocolParams& params,
                                       std::optional<double> g) {
  const SqueezerMoments m = noisy_squeezer_moments(params);

  NoisyEprResult out;
  out.delta_epr = m.var_atom + m.var_light - 2.0 * m.cross;

  double gain;
  if (g.has_value()) {
    gain = *g;
  } else {
    const auto var_fb = [&](double x) {
      return m.var_atom + x * x * m.var_light - 2.0 * x * m.cross;
    };
    const double hi = std::max(1.0, 2.0 * m.cross / m.var_light);
    gain = golden_section_minimize(var_fb, 0.0, hi).x;
  }
  out.squeezing.gain = gain;
  out.squeezing.var_p_fb =
      m.var_atom + gain * gain * m.var_light - 2.0 * gain * m.cross;
  out.squeezing.var_x = m.var_atom;
  return out;
}

CouplingOptimum optimize_epr_coupling(ProtocolParams params, double lo,
                                      double hi) {
  params.setup = Setup::squeezer;
  const MinResult m = golden_section_minimize(
      [&](double k2) {
        params.kappa2 = k2;
        return noisy_epr_and_squeezing(params).delta_epr;
      },
      lo, hi);
  return {m.x, m.value};
}

}  // namespace doublepass
