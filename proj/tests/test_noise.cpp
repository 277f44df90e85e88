#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "doublepass/envelope.hpp"
#include "doublepass/epr.hpp"
#include "doublepass/fidelity.hpp"
#include "doublepass/memory.hpp"
#include "doublepass/noise.hpp"
#include "doublepass/oracle.hpp"
#include "doublepass/params.hpp"

using namespace doublepass;

namespace {

ProtocolParams noisy_params(double k2, double eta, double r,
                            Setup setup = Setup::memory) {
  ProtocolParams p;
  p.kappa2 = k2;
  p.eta = eta;
  p.r = r;
  p.setup = setup;
  return p;
}

Eigen::VectorXd full_row(const PulseOracle::Row& r) {
  Eigen::VectorXd v(2 + r.light.size() + r.ancilla.size());
  v << r.atoms, r.light, r.ancilla;
  return v;
}

double coef(const NoisyIOBundle& b, const char* label) {
  const int i = b.find_mode(label);
  REQUIRE(i >= 0);
  return b.S(0, 2 * i);
}

}  // namespace

TEST_CASE("generalized exponent covers both setups") {
  CHECK(generalized_exponent(noisy_params(1.0, 0.075, 0.075)) ==
        doctest::Approx(0.925).epsilon(1e-15));
  CHECK(generalized_exponent(noisy_params(1.0, 0.1, 0.1, Setup::squeezer)) ==
        doctest::Approx(0.7).epsilon(1e-15));
  // coupling is fully reflected away as r -> 1/2; only decay is left
  CHECK(generalized_exponent(noisy_params(3.0, 0.2, 0.49)) ==
        doctest::Approx(0.2 + 3.0 * 0.02).epsilon(1e-15));
  // decay can overwhelm the squeezer: the exponent goes negative
  CHECK(generalized_exponent(noisy_params(0.5, 0.6, 0.1, Setup::squeezer)) ==
        doctest::Approx(0.4 - 0.6).epsilon(1e-15));
}

TEST_CASE("write-in bundle collapses to the lossless relation") {
  const NoisyIOBundle b = noisy_write_in(noisy_params(1.0, 0.0, 0.0));
  const LinearIOMap ideal = write_in_map(1.0);
  CHECK(std::abs(coef(b, "atoms in") - ideal.S(0, 0)) < 1e-12);
  CHECK(std::abs(coef(b, "write-pulse us+") - ideal.S(0, 2)) < 1e-12);
  CHECK(std::abs(coef(b, "write-pulse ls+")) < 1e-15);
  CHECK(std::abs(coef(b, "atomic noise")) < 1e-15);
  CHECK(b.Y.cwiseAbs().maxCoeff() < 1e-15);
  CHECK(b.c[4] == 0.0);  // no mid-wall residual without walls
  CHECK((b.out_covariance() - 0.5 * Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK(b.commutator_defect() < 1e-12);

  // atom damping runs at the generalized exponent once noise is on
  const NoisyIOBundle n = noisy_write_in(noisy_params(2.0, 0.075, 0.075));
  CHECK(coef(n, "atoms in") ==
        doctest::Approx(std::exp(-0.5 * 1.775)).epsilon(1e-12));
  CHECK(coef(n, "atoms in") == doctest::Approx(0.41168368).epsilon(1e-7));
}

TEST_CASE("write-in commutator budget closes across the parameter box") {
  for (double k2 : {0.25, 1.0, 2.0, 4.0}) {
    for (double eta : {0.0, 0.05, 0.3}) {
      for (double r : {0.0, 0.05, 0.2, 0.45}) {
        CAPTURE(k2);
        CAPTURE(eta);
        CAPTURE(r);
        const NoisyIOBundle b = noisy_write_in(noisy_params(k2, eta, r));
        CHECK(b.commutator_defect() < 1e-12);
        CHECK(b.Y(0, 0) >= 0.0);
        // heisenberg floor of the traced channel
        CHECK(b.out_covariance().determinant() >= 0.25 - 1e-12);
      }
    }
  }
}

TEST_CASE("read-out bundle collapses to the retrieval relation") {
  const NoisyIOBundle b = noisy_read_out(noisy_params(1.0, 0.0, 0.0));
  const double s = std::sqrt(-std::expm1(-1.0));
  const double e = std::exp(-0.5);
  CHECK(std::abs(b.c[0] + s) < 1e-12);
  CHECK(std::abs(b.c[1] - e) < 1e-12);
  for (int i = 2; i < 9; ++i) CHECK(std::abs(b.c[i]) < 1e-15);
  const LinearIOMap ideal = read_out_map(1.0);
  CHECK(std::abs(coef(b, "atoms in") - ideal.S(4, 0)) < 1e-12);
  CHECK(std::abs(coef(b, "read-pulse us+") - ideal.S(4, 2)) < 1e-12);
  CHECK((b.out_covariance() - 0.5 * Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK(b.commutator_defect() < 1e-12);
}

TEST_CASE("read-out commutator budget closes across the parameter box") {
  for (double k2 : {0.25, 1.0, 2.0, 4.0}) {
    for (double eta : {0.0, 0.05, 0.3}) {
      for (double r : {0.0, 0.05, 0.2, 0.45}) {
        CAPTURE(k2);
        CAPTURE(eta);
        CAPTURE(r);
        const NoisyIOBundle b = noisy_read_out(noisy_params(k2, eta, r));
        CHECK(b.commutator_defect() < 1e-12);
        CHECK(b.c[6] == doctest::Approx(std::sqrt(r)).epsilon(1e-15));
        CHECK(b.Y(0, 0) >= 0.0);  // unhoused kernel rest is a real variance
        CHECK(b.Y(0, 1) == 0.0);
        CHECK(b.Yc(0, 1) == -b.Yc(1, 0));
        CHECK(b.out_covariance().determinant() >= 0.25 - 1e-12);
      }
    }
  }
}

// The slice integrator is the ground truth for every derived coefficient:
// project its output rows on the envelope modes and compare, per channel.
TEST_CASE("noisy memory bundles match the slice integrator") {
  for (double k2 : {0.5, 1.0, 2.0}) {
    for (double eta : {0.05, 0.1}) {
      for (double r : {0.05, 0.1}) {
        CAPTURE(k2);
        CAPTURE(eta);
        CAPTURE(r);
        const ProtocolParams p = noisy_params(k2, eta, r);
        const int n = p.n_segments;
        const double w = p.wt();
        PulseOracle oracle(p);
        const PulseOracle::Row wx = oracle.atom_row(0);
        const PulseOracle::Row wp = oracle.atom_row(1);

        const Eigen::VectorXd v_usp =
            mode_x_row(plus_mode(w, p.omega_T, Sideband::upper), n);
        const Eigen::VectorXd v_usm =
            mode_x_row(minus_mode(w, p.omega_T, Sideband::upper), n);
        const Eigen::VectorXd v_lsp =
            mode_p_row(plus_mode(w, p.omega_T, Sideband::lower), n);
        const Eigen::VectorXd v_lsm =
            mode_p_row(minus_mode(w, p.omega_T, Sideband::lower), n);

        // write-in row against the bundle
        const NoisyIOBundle wb = noisy_write_in(p);
        Eigen::Matrix2d G2;
        G2 << v_usp.squaredNorm(), v_usp.dot(v_lsp), v_usp.dot(v_lsp),
            v_lsp.squaredNorm();
        const Eigen::Vector2d cw =
            G2.ldlt().solve(Eigen::Vector2d(wx.light.dot(v_usp),
                                            wx.light.dot(v_lsp)));
        CHECK(std::abs(coef(wb, "atoms in") - wx.atoms[0]) < 1e-2);
        CHECK(std::abs(coef(wb, "write-pulse us+") - cw[0]) < 1e-2);
        CHECK(std::abs(coef(wb, "write-pulse ls+") - cw[1]) < 1e-2);
        const double wa = coef(wb, "atomic noise");
        CHECK(std::abs(wa * wa -
                       oracle.channel_power(wx, AncillaChannel::atomic)) <
              1e-2);
        CHECK(std::abs(2.0 * wb.Y(0, 0) -
                       oracle.channel_power(wx, AncillaChannel::mid_wall)) <
              1e-2);

        // read-out row against the bundle, all five mode coefficients
        const NoisyIOBundle rb = noisy_read_out(p);
        const PulseOracle::Row rx =
            oracle.mode_row(minus_mode(w, p.omega_T, Sideband::upper), 0);
        Eigen::Matrix4d G4;
        Eigen::Vector4d b4;
        const Eigen::VectorXd* vs[4] = {&v_usp, &v_usm, &v_lsp, &v_lsm};
        for (int i = 0; i < 4; ++i) {
          for (int j = 0; j < 4; ++j) G4(i, j) = vs[i]->dot(*vs[j]);
          b4[i] = rx.light.dot(*vs[i]);
        }
        const Eigen::Vector4d cr = G4.ldlt().solve(b4);
        CHECK(std::abs(coef(rb, "atoms in") - rx.atoms[0]) < 1e-2);
        CHECK(std::abs(coef(rb, "read-pulse us+") - cr[0]) < 1e-2);
        CHECK(std::abs(coef(rb, "read-pulse us-") - cr[1]) < 1e-2);
        CHECK(std::abs(coef(rb, "read-pulse ls+") - cr[2]) < 1e-2);
        CHECK(std::abs(coef(rb, "read-pulse ls-") - cr[3]) < 1e-2);
        const double ra = coef(rb, "atomic noise");
        const double rm = coef(rb, "mid-wall noise");
        CHECK(std::abs(ra * ra -
                       oracle.channel_power(rx, AncillaChannel::atomic)) <
              1e-2);
        CHECK(std::abs(rm * rm + 2.0 * rb.Y(0, 0) -
                       oracle.channel_power(rx, AncillaChannel::mid_wall)) <
              1e-2);
        CHECK(std::abs(r -
                       oracle.channel_power(rx, AncillaChannel::exit_wall)) <
              1e-2);
        CHECK(std::abs(rb.out_covariance()(0, 0) -
                       0.5 * full_row(rx).squaredNorm()) < 1e-2);

        // chain the two pulses and compare the end-to-end signal and noise
        const NoisyIOBundle tb = noisy_complete_transfer(p);
        const Eigen::VectorXd via =
            rx.atoms[0] * wx.light + rx.atoms[1] * wp.light;
        const Eigen::Vector2d ct = G2.ldlt().solve(
            Eigen::Vector2d(via.dot(v_usp), via.dot(v_lsp)));
        CHECK(std::abs(coef(tb, "signal in") - ct[0]) < 1e-2);
        const Eigen::VectorXd u_write =
            rx.atoms[0] * full_row(wx) + rx.atoms[1] * full_row(wp);
        const double var_o =
            0.5 * (u_write.squaredNorm() + rx.light.squaredNorm() +
                   rx.ancilla.squaredNorm());
        CHECK(std::abs(tb.out_covariance()(0, 0) - var_o) < 1e-2);
      }
    }
  }
}

TEST_CASE("first wall splits the signal without changing the moments") {
  ProtocolParams p = noisy_params(1.0, 0.075, 0.075);
  const NoisyIOBundle open = noisy_complete_transfer(p);
  p.first_wall_loss = true;
  const NoisyIOBundle walled = noisy_complete_transfer(p);
  CHECK(open.find_mode("first-wall noise") == -1);
  const double k_open = coef(open, "signal in");
  CHECK(coef(walled, "signal in") ==
        doctest::Approx(std::sqrt(1.0 - p.r) * k_open).epsilon(1e-14));
  CHECK(coef(walled, "first-wall noise") ==
        doctest::Approx(std::sqrt(p.r) * k_open).epsilon(1e-14));
  // a vacuum slot split against vacuum: all second moments are untouched
  CHECK((open.out_covariance() - walled.out_covariance())
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  CHECK(open.commutator_defect() < 1e-12);
  CHECK(walled.commutator_defect() < 1e-12);
}

TEST_CASE("bogoliubov split of the complete transfer") {
  SUBCASE("lossless transfer is purely passive") {
    const BogoliubovDecomp d =
        bogoliubov_decompose(noisy_complete_transfer(noisy_params(1.0, 0.0, 0.0)));
    CHECK(std::abs(d.k[0].real() + (-std::expm1(-1.0))) < 1e-12);
    CHECK(std::abs(d.k[0].imag()) < 1e-15);
    CHECK(d.n_c < 1e-12);
    CHECK(d.n_a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.weak_noise);
  }

  SUBCASE("decay without reflections stays passive") {
    const BogoliubovDecomp d =
        bogoliubov_decompose(noisy_complete_transfer(noisy_params(1.0, 0.2, 0.0)));
    CHECK(d.n_c < 1e-12);
    CHECK(std::abs(d.n_a - 1.0) < 1e-12);
  }

  SUBCASE("identity n_a^2 - n_c^2 = 1 under full noise") {
    for (double r : {0.05, 0.1, 0.2}) {
      CAPTURE(r);
      const BogoliubovDecomp d = bogoliubov_decompose(
          noisy_complete_transfer(noisy_params(1.0, 0.075, r)));
      CHECK(std::abs(d.n_a * d.n_a - d.n_c * d.n_c - 1.0) < 1e-9);
      CHECK(d.n_c > 0.0);
    }
  }

  SUBCASE("reflections drive the active content monotonically") {
    double prev = -1.0;
    for (double r : {0.0, 0.05, 0.1, 0.15}) {
      const BogoliubovDecomp d = bogoliubov_decompose(
          noisy_complete_transfer(noisy_params(1.0, 0.075, r)));
      CHECK(d.n_c > prev);
      prev = d.n_c;
    }
  }

  SUBCASE("an inconsistent bundle is rejected") {
    NoisyIOBundle b;
    b.modes = {{"signal in", -1, 0, false}};
    b.S = 0.9 * Eigen::MatrixXd::Identity(2, 2);
    b.Y = Eigen::MatrixXd::Zero(2, 2);
    b.Yc = Eigen::MatrixXd::Zero(2, 2);
    CHECK_THROWS_AS(bogoliubov_decompose(b), std::runtime_error);
  }
}

TEST_CASE("bundle register sanity checks") {
  const NoisyIOBundle b = noisy_read_out(noisy_params(1.0, 0.05, 0.05));
  CHECK(b.find_mode("no such mode") == -1);
  CHECK(b.n_modes() == 8);

  NoisyIOBundle bad;
  bad.modes = {{"a", 0, +1, false}, {"b", 0, -1, true}};
  bad.family_overlap = {0.5};
  bad.S = Eigen::MatrixXd::Zero(2, 4);
  bad.Y = Eigen::MatrixXd::Zero(2, 2);
  bad.Yc = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(bad.gram(), std::logic_error);
}

TEST_CASE("qubit fidelity formula: structure and guards") {
  const BogoliubovDecomp d = bogoliubov_decompose(
      noisy_complete_transfer(noisy_params(1.0, 0.075, 0.075)));
  CHECK_THROWS_AS(noisy_qubit_fidelity(d, 0.9, 0.1), std::invalid_argument);

  // vacuum input: overlap of the noise-broadened vacuum with vacuum
  const double nc2 = d.n_c * d.n_c;
  const Eigen::Vector2d zero(0.0, 0.0);
  const Eigen::Vector2d var(nc2 + 0.5, nc2 + 0.5);
  CHECK(noisy_qubit_fidelity(d, 1.0, 0.0) ==
        doctest::Approx(coherent_overlap(zero, zero, var)).epsilon(1e-12));

  // the relative phase of the superposition drops out
  const double inv = 1.0 / std::sqrt(2.0);
  const std::complex<double> ph = std::polar(1.0, 1.1);
  CHECK(noisy_qubit_fidelity(d, inv, inv) ==
        doctest::Approx(noisy_qubit_fidelity(d, inv, inv * ph))
            .epsilon(1e-15));

  const double f1 = noisy_qubit_fidelity(d, 0.0, 1.0);
  CHECK(f1 > 0.0);
  CHECK(f1 < 1.0);
}

TEST_CASE("first-order qubit fidelity tracks the beam-splitter-plus-pair form") {
  // Independent closed form for the same channel: attenuate to |k1|, then
  // admix n_c pair excitations; exact overlap in the {0,1}-photon span is
  //   F = (|a|^2 + |b|^2 |k1| / (1+n_c^2))^2 / (1+n_c^2).
  int tested = 0;
  for (auto [k2, eta, r] : {std::tuple{0.5, 0.05, 0.05},
                            std::tuple{0.5, 0.05, 0.1},
                            std::tuple{1.0, 0.05, 0.05},
                            std::tuple{0.25, 0.1, 0.1}}) {
    const BogoliubovDecomp d =
        bogoliubov_decompose(noisy_complete_transfer(noisy_params(k2, eta, r)));
    if (d.n_c > 0.1) continue;  // first-order regime only
    ++tested;
    const double nc2 = d.n_c * d.n_c;
    const double k1 = std::abs(d.k[0]);
    for (double th : {0.3 * M_PI, 0.5 * M_PI, 0.7 * M_PI}) {
      CAPTURE(k2);
      CAPTURE(r);
      CAPTURE(th);
      const double a = std::cos(0.5 * th);
      const double b = std::sin(0.5 * th);
      const double amp = a * a + b * b * k1 / (1.0 + nc2);
      const double exact = amp * amp / (1.0 + nc2);
      CHECK(std::abs(noisy_qubit_fidelity(d, a, b) - exact) < 5e-3);
    }
  }
  CHECK(tested >= 3);
}

TEST_CASE("average qubit fidelity: lossless reduction and monotone damage") {
  const FidelityReport ideal = noisy_average_qubit(noisy_params(1.0, 0.0, 0.0));
  // the Bloch sphere is sampled on a trapezoid grid: allow its O(h^2) error
  const double x = std::exp(-1.0);
  CHECK(ideal.average == doctest::Approx(1.0 - x + x * x / 3.0).epsilon(5e-8));
  CHECK(ideal.average ==
        doctest::Approx(average_qubit(1.0).average).epsilon(5e-8));
  const double c = -std::expm1(-1.0);
  CHECK(ideal.per_state ==
        doctest::Approx(0.25 * (1.0 + c) * (1.0 + c)).epsilon(1e-12));
  CHECK(ideal.classical_limit == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  double prev = 2.0;
  for (double eta : {0.0, 0.05, 0.1}) {
    const double f = noisy_average_qubit(noisy_params(1.0, eta, 0.075)).average;
    CHECK(f < prev);
    prev = f;
  }
  prev = 2.0;
  for (double r : {0.0, 0.05, 0.1}) {
    const double f = noisy_average_qubit(noisy_params(1.0, 0.075, r)).average;
    CHECK(f < prev);
    prev = f;
  }

  // the incoming-qubit wall is part of the figure of merit, not a knob
  ProtocolParams p = noisy_params(1.0, 0.075, 0.075);
  const double f_default = noisy_average_qubit(p).average;
  p.first_wall_loss = true;
  CHECK(noisy_average_qubit(p).average ==
        doctest::Approx(f_default).epsilon(1e-15));
}

TEST_CASE("qubit transfer beats the classical bound at 7.5% noise") {
  double best = 0.0;
  for (double k2 = 0.25; k2 <= 4.01; k2 += 0.25) {
    const FidelityReport rep =
        noisy_average_qubit(noisy_params(k2, 0.075, 0.075));
    CHECK(rep.beats_classical == (rep.average > rep.classical_limit));
    best = std::max(best, rep.average);
  }
  CHECK(best > 2.0 / 3.0);
  CHECK(best < 1.0);
}

TEST_CASE("coherent fidelity: lossless reduction, damage, classical bound") {
  CHECK(noisy_coherent_fidelity(noisy_params(1.0, 0.0, 0.0), 8.0) ==
        doctest::Approx(1.0 / (1.0 + 8.0 * std::exp(-2.0))).epsilon(1e-12));
  CHECK(noisy_coherent_fidelity(noisy_params(3.0, 0.0, 0.0), 20.0) ==
        doctest::Approx(1.0 / (1.0 + 20.0 * std::exp(-6.0))).epsilon(1e-12));
  CHECK(noisy_coherent_fidelity(noisy_params(1.0, 0.0, 0.0), 0.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(noisy_coherent_fidelity(noisy_params(1.0, 0.0, 0.0), -1.0),
                  std::invalid_argument);

  double prev = 2.0;
  for (double eta : {0.0, 0.05, 0.1}) {
    const double f =
        noisy_coherent_fidelity(noisy_params(1.0, eta, 0.075), 8.0);
    CHECK(f < prev);
    prev = f;
  }
  prev = 2.0;
  for (double r : {0.0, 0.05, 0.1}) {
    const double f =
        noisy_coherent_fidelity(noisy_params(1.0, 0.075, r), 8.0);
    CHECK(f < prev);
    prev = f;
  }

  // referenced to the in-cell mode: the wall flag must not leak in
  ProtocolParams p = noisy_params(1.0, 0.075, 0.075);
  const double f_default = noisy_coherent_fidelity(p, 8.0);
  p.first_wall_loss = true;
  CHECK(noisy_coherent_fidelity(p, 8.0) ==
        doctest::Approx(f_default).epsilon(1e-15));

  CHECK(classical_limit_coherent(8.0) ==
        doctest::Approx(17.0 / 33.0).epsilon(1e-12));
  double best = 0.0;
  for (double k2 = 0.25; k2 <= 4.01; k2 += 0.25)
    best = std::max(
        best, noisy_coherent_fidelity(noisy_params(k2, 0.075, 0.075), 8.0));
  CHECK(best > 17.0 / 33.0);
}

TEST_CASE("squeezer moments collapse to the lossless two-mode squeezer") {
  for (double k2 : {0.5, 1.0, 2.0}) {
    CAPTURE(k2);
    const ProtocolParams p = noisy_params(k2, 0.0, 0.0, Setup::squeezer);
    const SqueezerMoments m = noisy_squeezer_moments(p);
    const double e = std::exp(0.5 * k2);
    const double s = std::sqrt(std::expm1(k2));
    CHECK(m.var_atom == doctest::Approx(0.5 * (e * e + s * s)).epsilon(1e-12));
    CHECK(m.var_light == doctest::Approx(0.5 * (e * e + s * s)).epsilon(1e-12));
    CHECK(m.cross == doctest::Approx(e * s).epsilon(1e-12));

    const NoisyEprResult res = noisy_epr_and_squeezing(p);
    CHECK(res.delta_epr ==
          doctest::Approx(epr_variances(k2).first).epsilon(1e-12));
    CHECK(res.delta_epr == doctest::Approx((e - s) * (e - s)).epsilon(1e-12));
    CHECK(std::abs(res.squeezing.gain - optimal_gain(k2)) < 1e-6);
    const FeedbackResult ref = spin_squeeze(k2, optimal_gain(k2));
    CHECK(res.squeezing.var_p_fb ==
          doctest::Approx(ref.var_p_fb).epsilon(1e-10));
    CHECK(res.squeezing.var_x == doctest::Approx(ref.var_x).epsilon(1e-12));
  }
}

TEST_CASE("noisy squeezer moments match the slice integrator") {
  for (double k2 : {0.5, 1.0, 2.0}) {
    for (double eta : {0.05, 0.1}) {
      for (double r : {0.05, 0.1}) {
        CAPTURE(k2);
        CAPTURE(eta);
        CAPTURE(r);
        const ProtocolParams p = noisy_params(k2, eta, r, Setup::squeezer);
        PulseOracle oracle(p);
        const ModeEnvelope env =
            plus_mode(p.squeezer_wt(), p.omega_T, Sideband::lower);
        const Eigen::VectorXd fx = full_row(oracle.atom_row(0));
        const Eigen::VectorXd fp = full_row(oracle.atom_row(1));
        const Eigen::VectorXd mX = full_row(oracle.mode_row(env, 0));
        const Eigen::VectorXd mP = full_row(oracle.mode_row(env, 1));

        const SqueezerMoments m = noisy_squeezer_moments(p);
        CHECK(std::abs(m.var_atom - 0.5 * fx.squaredNorm()) < 2e-2);
        CHECK(std::abs(m.var_light - 0.5 * mP.squaredNorm()) < 2e-2);
        CHECK(std::abs(m.cross - 0.5 * fx.dot(mP)) < 1e-2);
        CHECK(std::abs(m.cross - 0.5 * fp.dot(mX)) < 1e-2);

        const double delta_o =
            0.25 * ((fx - mP).squaredNorm() + (fp - mX).squaredNorm());
        const NoisyEprResult res = noisy_epr_and_squeezing(p);
        CHECK(std::abs(res.delta_epr - delta_o) / delta_o < 2e-2);
      }
    }
  }
}

TEST_CASE("squeezer stays finite when decay cancels the gain") {
  // sigma = k2(1-2r) - eta crosses zero: series branches must take over
  for (double eta : {0.39, 0.4, 0.41}) {
    CAPTURE(eta);
    const ProtocolParams p = noisy_params(0.5, eta, 0.1, Setup::squeezer);
    const SqueezerMoments m = noisy_squeezer_moments(p);
    CHECK(std::isfinite(m.var_atom));
    CHECK(std::isfinite(m.var_light));
    CHECK(std::isfinite(m.cross));
    CHECK(m.var_atom > 0.0);
    const NoisyEprResult res = noisy_epr_and_squeezing(p);
    CHECK(res.delta_epr > 0.0);
    CHECK(std::isfinite(res.squeezing.var_p_fb));
  }
}

TEST_CASE("noisy EPR variance has an interior optimum in the coupling") {
  const double eta = 0.1, r = 0.1;
  double best = 1e9, best_k2 = 0.0;
  for (double k2 = 0.2; k2 <= 4.01; k2 += 0.2) {
    const double d =
        noisy_epr_and_squeezing(noisy_params(k2, eta, r, Setup::squeezer))
            .delta_epr;
    if (d < best) {
      best = d;
      best_k2 = k2;
    }
  }
  CHECK(best_k2 > 0.25);  // not pinned at the low edge
  CHECK(best_k2 < 3.95);  // and the blow-up at large coupling is real
  CHECK(best < 0.5);      // still far below the separability bound of 1
}

TEST_CASE("feedback gain sits measurably away from unity") {
  const NoisyEprResult ideal =
      noisy_epr_and_squeezing(noisy_params(1.0, 0.0, 0.0, Setup::squeezer));
  CHECK(std::abs(ideal.squeezing.gain - 1.0) > 0.01);
  const NoisyEprResult noisy =
      noisy_epr_and_squeezing(noisy_params(1.0, 0.1, 0.1, Setup::squeezer));
  CHECK(std::abs(noisy.squeezing.gain - 1.0) > 0.01);

  // fixed gain is honored and the optimum really is the parabola vertex
  const ProtocolParams p = noisy_params(1.0, 0.1, 0.1, Setup::squeezer);
  const SqueezerMoments m = noisy_squeezer_moments(p);
  const NoisyEprResult fixed = noisy_epr_and_squeezing(p, 0.5);
  CHECK(fixed.squeezing.gain == 0.5);
  CHECK(fixed.squeezing.var_p_fb ==
        doctest::Approx(m.var_atom + 0.25 * m.var_light - m.cross)
            .epsilon(1e-12));
  const NoisyEprResult tuned = noisy_epr_and_squeezing(p);
  CHECK(std::abs(tuned.squeezing.gain - m.cross / m.var_light) < 1e-5);
  CHECK(fixed.squeezing.var_p_fb >= tuned.squeezing.var_p_fb);
}

TEST_CASE("noise monotonically damages the EPR resource") {
  double prev = 0.0;
  for (double r : {0.0, 0.05, 0.1, 0.15}) {
    const double d =
        noisy_epr_and_squeezing(noisy_params(1.0, 0.1, r, Setup::squeezer))
            .delta_epr;
    CHECK(d > prev);
    prev = d;
  }
  prev = 0.0;
  for (double eta : {0.0, 0.1, 0.2}) {
    const double d =
        noisy_epr_and_squeezing(noisy_params(1.0, eta, 0.1, Setup::squeezer))
            .delta_epr;
    CHECK(d > prev);
    prev = d;
  }
}
