"""Build-tree smoke test for the python bindings.

Run with PYTHONPATH pointing at python/ and the build directory holding
_core; exits nonzero on the first failed check.
"""

import math
import sys

import doublepass as dp


def approx(a, b, tol=1e-12):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    # lossless closed forms through the composed maps
    rep = dp.average_coherent(8.0, 1.0)
    approx(rep.average, 1.0 / (1.0 + 8.0 * math.exp(-2.0)))
    assert not rep.beats_classical  # kappa2 = 1 is below the n = 8 threshold
    assert dp.average_coherent(8.0, 2.0).beats_classical
    approx(dp.classical_limit_coherent(8.0), 17.0 / 33.0)
    approx(dp.average_qubit(1.0).average,
           1.0 - math.exp(-1.0) + math.exp(-2.0) / 3.0)

    # EPR identities and covariance propagation
    sq, anti = dp.epr_variances(1.0)
    z = math.acosh(math.exp(0.5))
    approx(sq, math.exp(-2.0 * z))
    approx(sq * anti, 1.0)
    out = dp.apply_map(dp.make_vacuum(4), dp.squeezer_maps(1.0))
    approx(dp.epr_variance(out, "atoms", "L~+"), sq)
    fb = dp.spin_squeeze(1.0, dp.optimal_gain(1.0))
    approx(fb.var_p_fb * fb.var_x, 0.25)

    # numpy interop: map matrices come back as arrays
    m = dp.write_in_map(1.0)
    assert m.S.shape == (4, 4)
    approx(m.S[0, 0], math.exp(-0.5))
    approx(dp.symplectic_residual(m.S), 0.0, 1e-12)

    # noise: losses damage the transfer, switched off they vanish
    p = dp.ProtocolParams()
    p.kappa2 = 1.0
    approx(dp.noisy_coherent_fidelity(p, 8.0),
           1.0 / (1.0 + 8.0 * math.exp(-2.0)))
    p.eta = 0.1
    p.r = 0.1
    noisy = dp.noisy_coherent_fidelity(p, 8.0)
    assert noisy < 1.0 / (1.0 + 8.0 * math.exp(-2.0))
    bundle = dp.noisy_complete_transfer(p)
    assert bundle.commutator_defect() < 1e-9
    assert bundle.out_covariance().shape == (2, 2)

    # slice integrator agrees with the closed-form write-in coefficient
    p_small = dp.ProtocolParams()
    p_small.kappa2 = 1.0
    p_small.n_segments = 800
    row = dp.PulseOracle(p_small).atom_row(0)
    approx(row.atoms[0], math.exp(-0.5), 2e-3)

    # figures and sweeps produce well-formed tables
    ids = dp.figure_ids()
    assert "5" in ids and "10b" in ids and len(ids) == 12
    table = dp.figure_table("5")
    assert table.columns[0] == "kappa2"
    assert len(table.rows) == 251
    text = dp.to_csv(table)
    again = dp.parse_csv(text)
    assert dp.to_csv(again) == text  # parse/format is stable at 12 digits
    approx(again.rows[0][1], table.rows[0][1], 1e-11)

    cfg = dp.SweepConfig()
    cfg.variable = "kappa2"
    cfg.from_ = 0.0
    cfg.to = 2.0
    cfg.steps = 5
    cfg.quantity = "epr_variance"
    swept = dp.sweep_table(cfg)
    assert len(swept.rows) == 5
    approx(swept.rows[0][1], 1.0)  # no coupling, no entanglement

    # self-validation harness is reachable and green at the fast level
    report = dp.run_validation(full=False)
    assert report.all_pass, report.first_failure
    assert len(report.checks) >= 10

    print("smoke test: all checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
