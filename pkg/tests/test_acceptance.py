"""Acceptance suite: one test per criterion, one PASS line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s``.  The Monte Carlo studies
use 500 paired trials at the default configuration (4 transmit antennas,
0 dB SNR, inverse XPD 0.2) and take a while single-threaded; module-scoped
fixtures share the heavy sweeps between criteria.
"""

import dataclasses

import numpy as np
import pytest

from polarsec import (
    ScenarioConfig,
    cross_correlation,
    effective_channel,
    gen_channel_set,
    make_sdp_problem,
    max_gen_eigvec,
    mrt_beamformer,
    optimal_beamformer,
    quadratic_forms,
    run_antenna_sweep,
    run_csi_error_sweep,
    run_multi_eve_sweep,
    run_snr_sweep,
    sdp_solve,
    secrecy_rate,
    solve_instance,
    solve_instance_fpa,
    trial_stream,
    zero_psv,
)
from polarsec.ao import MAX_ITERS
from polarsec.experiments import (
    SCHEME_FPA,
    SCHEME_MRT,
    SCHEME_PROPOSED,
    SCHEME_UPPER,
)
from polarsec.polarforming import build_lifted

from dual_oracle import charnes_cooper_restore, dual_subgradient_bound
from test_ao import brute_force_single_antenna, rate_sequence

BASE = ScenarioConfig(trials=500, master_seed=0)


def _series(result, scheme, column="mean_secrecy_rate"):
    vals = [
        (row.sweep_value, getattr(row, column))
        for row in result.rows
        if row.scheme == scheme
    ]
    return [y for _, y in sorted(vals)]


@pytest.fixture(scope="module")
def paired_study():
    """500 paired instances at the default configuration.

    Per instance: proposed trace diagnostics plus final metrics of the
    proposed and FPA schemes on the same realization.
    """
    rows = []
    for t in range(BASE.trials):
        stream = trial_stream(BASE.master_seed, t)
        channels = gen_channel_set(BASE, stream)
        trace = solve_instance(channels, BASE, stream)
        seq = rate_sequence(trace)
        monotone = all(b >= a - 1e-9 for a, b in zip(seq, seq[1:]))
        h_user = effective_channel(channels.user_links, channels.g_user, trace.final_psv)
        h_eve = effective_channel(channels.eve_column(0), channels.g_eve, trace.final_psv)
        prop = secrecy_rate(h_user, h_eve, trace.final_w, BASE.sigma2)
        fpa_trace = solve_instance_fpa(channels, BASE)
        h_user_f = effective_channel(channels.user_links, channels.g_user, fpa_trace.final_psv)
        h_eve_f = effective_channel(channels.eve_column(0), channels.g_eve, fpa_trace.final_psv)
        fpa = secrecy_rate(h_user_f, h_eve_f, fpa_trace.final_w, BASE.sigma2)
        rows.append(
            {
                "monotone": monotone,
                "converged": trace.converged,
                "iters": len(trace.iterations),
                "proposed": prop.secrecy_rate,
                "proposed_eve": prop.eve_rate,
                "upper": trace.final_upper_bound_rate,
                "fpa": fpa.secrecy_rate,
                "fpa_eve": fpa.eve_rate,
            }
        )
    return rows


@pytest.fixture(scope="module")
def snr_sweep():
    return run_snr_sweep(BASE, jobs=1)


@pytest.fixture(scope="module")
def antenna_sweep():
    return run_antenna_sweep(BASE, jobs=1)


@pytest.fixture(scope="module")
def csi_sweep():
    return run_csi_error_sweep(BASE, jobs=1)


@pytest.fixture(scope="module")
def multi_eve_sweep():
    return run_multi_eve_sweep(BASE, jobs=1)


def test_ao_monotonicity(paired_study):
    """Every trace non-decreasing within 1e-9 and converged within the cap."""
    sample = paired_study[:200]
    assert all(row["monotone"] for row in sample)
    assert all(row["converged"] for row in sample)
    assert all(row["iters"] <= MAX_ITERS for row in sample)
    print(
        "ACCEPTANCE ao-monotonicity: PASS "
        f"(200 instances, max iterations {max(r['iters'] for r in sample)})"
    )


def test_single_antenna_brute_force_oracle():
    """Pipeline matches a 10^4-point exhaustive phase grid at one antenna."""
    cfg = dataclasses.replace(BASE, n_bs=1)
    worst = 0.0
    for t in range(100):
        stream = trial_stream(cfg.master_seed, t)
        channels = gen_channel_set(cfg, stream)
        trace = solve_instance(channels, cfg, stream)
        oracle = brute_force_single_antenna(channels, cfg)
        assert abs(trace.final_rate - oracle) <= 1e-3
        assert trace.final_upper_bound_rate >= oracle - 1e-6
        worst = max(worst, abs(trace.final_rate - oracle))
    print(f"ACCEPTANCE single-antenna-oracle: PASS (100 instances, worst gap {worst:.2e})")


def test_relaxation_ordering(paired_study):
    """Upper bound dominates on every instance; mean relative gap small."""
    gaps = []
    for row in paired_study:
        assert row["upper"] >= row["proposed"] - 1e-6
        gaps.append((row["upper"] - row["proposed"]) / max(row["upper"], 1e-12))
    mean_gap = float(np.mean(gaps))
    assert mean_gap <= 0.05
    print(
        "ACCEPTANCE relaxation-ordering: PASS "
        f"(500 instances, mean relative gap {mean_gap:.2e})"
    )


def test_sdp_solver_certification():
    """Contract tolerances plus agreement with the dual-subgradient oracle."""
    # analytic eigenvalue cases first
    sol = sdp_solve(
        make_sdp_problem(np.diag([2.0, 1.0]).astype(complex), [(np.eye(2, dtype=complex), 1.0)])
    )
    assert abs(sol.objective_value - 2.0) <= 1e-8
    rng = np.random.default_rng(77)
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    c = 0.5 * (a + a.conj().T)
    sol = sdp_solve(make_sdp_problem(c, [(np.eye(5, dtype=complex), 1.0)]))
    assert abs(sol.objective_value - np.linalg.eigvalsh(c)[-1]) <= 1e-8

    worst_rel = 0.0
    count = 0
    for t in range(50):
        n = 2 + t % 7  # orders 5 .. 17 after homogenization
        cfg = dataclasses.replace(BASE, n_bs=n)
        stream = trial_stream(1000 + t, 0)
        channels = gen_channel_set(cfg, stream)
        psv = zero_psv(n)
        h_user = effective_channel(channels.user_links, channels.g_user, psv)
        h_eve = effective_channel(channels.eve_column(0), channels.g_eve, psv)
        w = optimal_beamformer(quadratic_forms(h_user, h_eve, cfg.sigma2), cfg.p_max)
        lp = build_lifted(channels, w, cfg.sigma2)
        n2 = 2 * n
        dim = n2 + 1
        objective = np.zeros((dim, dim), complex)
        objective[:n2, :n2] = lp.d_user
        objective[n2, n2] = 1.0
        first = np.zeros((dim, dim), complex)
        first[:n2, :n2] = lp.d_eve
        first[n2, n2] = 1.0
        constraints = [(first, 1.0)]
        for l in range(n2):
            pin = np.zeros((dim, dim), complex)
            pin[l, l] = 1.0
            pin[n2, n2] = -1.0
            constraints.append((pin, 0.0))
        problem = make_sdp_problem(objective, constraints)
        sol = sdp_solve(problem)
        scale = 1.0 + abs(sol.objective_value)
        assert sol.duality_gap <= 1e-6 * scale
        assert sol.feas_residual <= 1e-7
        bound = dual_subgradient_bound(problem, charnes_cooper_restore(problem))
        rel = abs(bound - sol.objective_value) / scale
        assert rel <= 1e-3
        worst_rel = max(worst_rel, rel)
        count += 1
    print(
        "ACCEPTANCE sdp-certification: PASS "
        f"({count} homogenized instances, worst oracle deviation {worst_rel:.2e})"
    )


def test_beamforming_optimality():
    """Closed-form beamformer beats 10^4 random feasible vectors everywhere."""
    rng = np.random.default_rng(4242)
    for _ in range(100):
        h_user = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        h_eve = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        pair = quadratic_forms(h_user, h_eve, 1.0)
        w = optimal_beamformer(pair, 1.0).w
        best = (np.real(w.conj() @ pair.a_user @ w) + 1.0) / (
            np.real(w.conj() @ pair.a_eve @ w) + 1.0
        )
        samples = rng.standard_normal((10_000, 4)) + 1j * rng.standard_normal((10_000, 4))
        samples /= np.linalg.norm(samples, axis=1, keepdims=True)
        nums = np.real(np.einsum("ki,ij,kj->k", samples.conj(), pair.a_user, samples)) + 1.0
        dens = np.real(np.einsum("ki,ij,kj->k", samples.conj(), pair.a_eve, samples)) + 1.0
        assert best >= np.max(nums / dens) - 1e-10

    # no eavesdropper: direction collapses to maximum ratio transmission
    for _ in range(20):
        h_user = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        pair = quadratic_forms(h_user, np.zeros(4, complex), 1.0)
        w = optimal_beamformer(pair, 1.0).w
        mrt = mrt_beamformer(h_user, 1.0).w
        alignment = abs(np.vdot(w, mrt)) / (np.linalg.norm(w) * np.linalg.norm(mrt))
        assert alignment >= 1.0 - 1e-8
    print("ACCEPTANCE beamforming-optimality: PASS (100 + 20 instances)")


def test_scheme_ordering(paired_study):
    """Paired means ordered; proposed beats FPA on >= 95% of instances."""
    proposed = np.array([row["proposed"] for row in paired_study])
    upper = np.array([row["upper"] for row in paired_study])
    fpa = np.array([row["fpa"] for row in paired_study])
    assert upper.mean() >= proposed.mean() - 1e-9
    assert proposed.mean() >= fpa.mean()
    beat = float(np.mean(proposed >= fpa - 1e-9))
    assert beat >= 0.95
    eve_prop = float(np.mean([row["proposed_eve"] for row in paired_study]))
    eve_fpa = float(np.mean([row["fpa_eve"] for row in paired_study]))
    assert eve_prop < eve_fpa
    print(
        "ACCEPTANCE scheme-ordering: PASS "
        f"(means: upper {upper.mean():.4f} >= proposed {proposed.mean():.4f} >= "
        f"fpa {fpa.mean():.4f}; win rate {100 * beat:.1f}%; "
        f"eve rates {eve_prop:.4f} < {eve_fpa:.4f})"
    )


def test_trend_reproduction(snr_sweep, antenna_sweep, multi_eve_sweep):
    """Monotone trends of the four studies at 500 paired trials."""
    prop_snr = _series(snr_sweep, SCHEME_PROPOSED)
    assert all(b > a for a, b in zip(prop_snr, prop_snr[1:]))
    eve_prop = _series(snr_sweep, SCHEME_PROPOSED, "mean_eve_rate")
    eve_fpa = _series(snr_sweep, SCHEME_FPA, "mean_eve_rate")
    assert all(p < f for p, f in zip(eve_prop, eve_fpa))

    prop_n = _series(antenna_sweep, SCHEME_PROPOSED)
    fpa_n = _series(antenna_sweep, SCHEME_FPA)
    upper_n = _series(antenna_sweep, SCHEME_UPPER)
    assert all(b > a for a, b in zip(prop_n, prop_n[1:]))
    gaps = [p - f for p, f in zip(prop_n, fpa_n)]
    # non-decreasing within Monte Carlo noise at 500 trials
    assert all(b >= a - 0.02 for a, b in zip(gaps, gaps[1:]))
    assert all(p <= u + 1e-6 for p, u in zip(prop_n, upper_n))
    corr_prop = _series(antenna_sweep, SCHEME_PROPOSED, "mean_cross_corr")
    corr_fpa = _series(antenna_sweep, SCHEME_FPA, "mean_cross_corr")
    assert all(p < f for p, f in zip(corr_prop, corr_fpa))

    prop_m = _series(multi_eve_sweep, SCHEME_PROPOSED)
    fpa_m = _series(multi_eve_sweep, SCHEME_FPA)
    assert all(b <= a + 0.02 for a, b in zip(prop_m, prop_m[1:]))
    assert all(p > f for p, f in zip(prop_m, fpa_m))
    print(
        "ACCEPTANCE trend-reproduction: PASS "
        f"(snr {prop_snr[0]:.3f}->{prop_snr[-1]:.3f}; antenna gap {gaps[0]:.3f}->{gaps[-1]:.3f}; "
        f"multi-eve {prop_m[0]:.3f}->{prop_m[-1]:.3f})"
    )


def test_csi_robustness(csi_sweep):
    """Degradation from perfect to worst-case estimates is positive, <= 10%."""
    prop = _series(csi_sweep, SCHEME_PROPOSED)
    clean, worst = prop[0], prop[-1]
    drop = (clean - worst) / clean
    assert 0.0 < drop <= 0.10
    fpa_rows = [row for row in csi_sweep.rows if row.scheme == SCHEME_FPA]
    first = fpa_rows[0]
    for row in fpa_rows[1:]:
        assert row.mean_secrecy_rate == first.mean_secrecy_rate
        assert row.mean_eve_rate == first.mean_eve_rate
        assert row.mean_cross_corr == first.mean_cross_corr
    print(f"ACCEPTANCE csi-robustness: PASS (drop {100 * drop:.2f}%, FPA bit-constant)")


def test_determinism(tmp_path):
    """Identical configuration and seed reproduce the CSV byte for byte."""
    cfg = dataclasses.replace(BASE, trials=25)
    a = run_snr_sweep(cfg, jobs=1)
    b = run_snr_sweep(cfg, jobs=1)
    assert a.to_csv_text() == b.to_csv_text()
    cfg_small = dataclasses.replace(BASE, trials=10)
    c = run_csi_error_sweep(cfg_small, [0.0, 0.5], jobs=1)
    d = run_csi_error_sweep(cfg_small, [0.0, 0.5], jobs=1)
    pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
    c.write_csv(pa)
    d.write_csv(pb)
    assert pa.read_bytes() == pb.read_bytes()
    print("ACCEPTANCE determinism: PASS (snr and csi-error sweeps byte-identical)")
