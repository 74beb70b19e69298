"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

Run on its own with ``pytest -m acceptance -s`` (or just ``pytest tests/test_acceptance.py``).
"""

import math
import time

import numpy as np
import pytest

from nqlab import bipartite as bp
from nqlab import cli
from nqlab import linearity as lin
from nqlab import qcore
from nqlab.lognlse import (
    Grid1D,
    LogNlseParams,
    evolve,
    free_gaussian_width,
    gaussian,
    make_gausson,
)
from nqlab.presets import PRESETS
from nqlab.qcore import BlochVector, bloch_to_density
from nqlab.weinberg import WeinbergParams, closed_form, evolve_numeric

pytestmark = pytest.mark.acceptance

R2 = 1 / math.sqrt(2)


@pytest.fixture
def report(capsys):
    def _report(number: int, title: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {title}: {detail}")

    return _report


def test_criterion_1_spin_oracle(report):
    params = WeinbergParams(1.0)
    s0 = BlochVector(R2, 0.0, R2)
    start = time.perf_counter()
    traj = evolve_numeric(params, s0, 10.0, 1e-3)
    elapsed = time.perf_counter() - start
    exact = np.array([closed_form(params, s0, t).as_array() for t in traj.times])
    err = float(np.max(np.linalg.norm(traj.states - exact, axis=1)))
    ok = err <= 1e-8 and elapsed < 1.0 and traj.times[-1] == pytest.approx(10.0)
    report(1, "spin oracle", ok, f"max Bloch error {err:.2e} (<= 1e-8), runtime {elapsed:.3f} s (< 1 s)")
    assert ok


def test_criterion_2_tilted_setting_curve(report):
    eps = 1.0
    ts = np.linspace(0.0, 10.0, 100)
    tilted = np.array([bp.epr_scenario(bp.EprSetting.tilted_45(), eps, t).mean_sigma2 for t in ts])
    straight = np.array([bp.epr_scenario(bp.EprSetting.z(), eps, t).mean_sigma2 for t in ts])
    expected = np.sin(math.sqrt(2) * eps * ts) / math.sqrt(2)
    e45 = float(np.max(np.abs(tilted - expected)))
    ez = float(np.max(np.abs(straight)))
    ok = e45 <= 1e-10 and ez <= 1e-12
    report(2, "Bob's <Sigma_2>(t) sweep", ok, f"45-degree max error {e45:.2e} (<= 1e-10), z-setting max {ez:.2e} (<= 1e-12)")
    assert ok


def test_criterion_3_signaling_maximum(report):
    eps = 1.0
    t_peak = math.pi / (2 * math.sqrt(2) * eps)
    peak = bp.signaling_statistic(eps, t_peak)
    ts = np.linspace(0, 2 * t_peak, 201)
    curve = np.array([bp.signaling_statistic(eps, t) for t in ts])
    argmax_ok = abs(ts[int(np.argmax(curve))] - t_peak) <= ts[1] - ts[0]
    rng = np.random.default_rng(2024)
    linear_max = 0.0
    for _ in range(100):
        if rng.uniform() < 0.5:
            dmap = lin.UnitaryGenerator(qcore.random_hermitian(rng, 2))
        else:
            dmap = lin.depolarizing(rng.uniform())
        linear_max = max(linear_max, bp.signaling_statistic(eps, rng.uniform(0, 10), dynamics=dmap))
    ok = abs(peak - R2) <= 1e-10 and argmax_ok and linear_max <= 1e-12
    report(
        3,
        "signaling maximum",
        ok,
        f"peak {peak:.12f} vs 1/sqrt2 (|diff| {abs(peak - R2):.1e}), linear-map max {linear_max:.1e} (<= 1e-12)",
    )
    assert ok


def test_criterion_4_proof_chain(report):
    rng = np.random.default_rng(4)
    worst = dict(mixture=0.0, purity=0.0, overlap=0.0, entropy=0.0)
    for _ in range(100):
        dim = int(rng.integers(2, 5))
        u = lin.UnitaryGenerator(qcore.random_hermitian(rng, dim))
        t = rng.uniform(0, 5)
        r1, r2 = qcore.random_density_matrix(rng, dim), qcore.random_density_matrix(rng, dim)
        psi, phi = qcore.random_state_vector(rng, dim), qcore.random_state_vector(rng, dim)
        worst["mixture"] = max(worst["mixture"], lin.mixture_linearity_residual(u, r1, r2, rng.uniform(), t))
        pin, pout = lin.purity_chain_check(u, r1, t)
        worst["purity"] = max(worst["purity"], abs(pout - pin))
        worst["overlap"] = max(worst["overlap"], lin.overlap_preservation_residual(u, psi, phi, t))
        e = lin.entropy_monotonicity_check(u, r2, t)
        worst["entropy"] = max(worst["entropy"], abs(e.entropy_out - e.entropy_in))
    ok = worst["mixture"] <= 1e-12 and worst["purity"] <= 1e-12 and worst["overlap"] <= 1e-10 and worst["entropy"] <= 1e-10
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    report(4, "unitary proof-chain properties (100 seeds)", ok, detail)
    assert ok


def test_criterion_5_nonlinearity_witness(report):
    flow = lin.WeinbergFlow.with_epsilon(1.0)
    t = 1.0
    w = cli.witness_states()
    witness = lin.mixture_linearity_residual(flow, w["rho1"], w["rho2"], 0.5, t)
    rng = np.random.default_rng(5)
    res, purity_drift = [], 0.0
    for _ in range(100):
        r1, r2 = qcore.random_density_matrix(rng, 2), qcore.random_density_matrix(rng, 2)
        res.append(lin.mixture_linearity_residual(flow, r1, r2, rng.uniform(), t))
        pin, pout = lin.purity_chain_check(flow, r1, t)
        purity_drift = max(purity_drift, abs(pout - pin))
    p95 = float(np.percentile(res, 95))
    ok = witness >= 0.01 and p95 >= 0.01 and purity_drift <= 1e-10
    report(
        5,
        "nonlinearity witness at eps t = 1",
        ok,
        f"witness residual {witness:.4f}, 95th percentile {p95:.4f} (>= 0.01), purity drift {purity_drift:.1e} (<= 1e-10)",
    )
    assert ok


def test_criterion_6_larger_system_consistency(report):
    rng = np.random.default_rng(6)
    linear_max, joint_max = 0.0, 0.0
    for _ in range(100):
        r1, r2 = qcore.random_density_matrix(rng, 2), qcore.random_density_matrix(rng, 2)
        p = rng.uniform()
        proj = qcore.projector_onto(qcore.random_state_vector(rng, 2))
        for dmap in (lin.UnitaryGenerator(qcore.random_hermitian(rng, 2)), lin.amplitude_damping(rng.uniform())):
            linear_max = max(linear_max, bp.derivative_consistency_residual(dmap, r1, r2, p, proj, rng.uniform(0, 3)))
        big = bp.make_correlated(r1, r2, p)
        for idx, rho, weight in ((0, r1, p), (1, r2, 1 - p)):
            joint_max = max(joint_max, abs(bp.joint_probability(big, proj, idx) - weight * qcore.expectation(proj, rho)))
    w = cli.witness_states()
    witness = bp.derivative_consistency_residual(lin.WeinbergFlow.with_epsilon(1.0), w["rho1"], w["rho2"], 0.5, w["proj"], 0.0)
    ok = linear_max <= 1e-8 and witness >= 0.05 and joint_max <= 1e-12
    report(
        6,
        "system-plus-environment consistency",
        ok,
        f"linear max {linear_max:.1e} (<= 1e-8), nonlinear witness {witness:.4f} (>= 0.05), joint probability {joint_max:.1e} (<= 1e-12)",
    )
    assert ok


def test_criterion_7_gausson_dichotomy(report):
    m, b = 1.0, 1.0
    params = LogNlseParams(mass=m, b=b, dt=1e-3)
    sigma0 = 1.0 / (2.0 * math.sqrt(m * b))
    grid = Grid1D.centered(1024, 10.0 * sigma0)

    start = time.perf_counter()
    psi0 = make_gausson(params, grid)
    _, held = evolve(params, psi0, 10.0)
    free_params = LogNlseParams(mass=m, b=0.0, dt=1e-3)
    t_spread = 8.0 * m * sigma0**2
    free0 = gaussian(grid, sigma0)
    _, spread = evolve(free_params, free0, t_spread, stride=50)
    elapsed = time.perf_counter() - start

    wh = np.asarray(held.width)
    hold_dev = float(np.max(np.abs(wh / wh[0] - 1)))
    ws, ts = np.asarray(spread.width), np.asarray(spread.t)
    growth = ws[-1] / ws[0]
    curve_dev = float(np.max(np.abs(ws / free_gaussian_width(sigma0, m, ts) - 1)))
    drift = max(float(np.max(np.abs(np.asarray(d.norm) - d.norm[0]))) for d in (held, spread))
    ok = hold_dev <= 0.01 and growth >= 2 and curve_dev <= 0.01 and drift <= 1e-8 and elapsed < 30
    report(
        7,
        "gausson dichotomy on +-10 sigma0, n = 1024",
        ok,
        f"gausson width deviation {hold_dev:.1e} (<= 1%), free growth x{growth:.2f} (>= 2), "
        f"free curve deviation {100 * curve_dev:.2f}% (<= 1%), norm drift {drift:.1e}, runtime {elapsed:.1f} s",
    )
    assert ok


def test_criterion_8_convergence_orders(report):
    params = WeinbergParams(1.0)
    s0 = BlochVector(R2, 0.0, R2)
    exact = closed_form(params, s0, 1.0).as_array()
    rk = [np.linalg.norm(evolve_numeric(params, s0, 1.0, dt).final().as_array() - exact) for dt in (0.1, 0.05, 0.025)]
    rk_ratios = [rk[0] / rk[1], rk[1] / rk[2]]

    grid = Grid1D.centered(256, 8.0)
    psi0 = gaussian(grid, 0.4)

    def run(dt):
        return evolve(LogNlseParams(b=1.0, dt=dt), psi0, 1.0)[0].amplitudes

    ref = run(0.01 / 8)
    errs = [np.max(np.abs(run(dt) - ref)) for dt in (0.02, 0.01)]
    strang = errs[0] / errs[1]
    ok = min(rk_ratios) >= 14 and abs(strang / 4 - 1) <= 0.2
    report(
        8,
        "convergence orders",
        ok,
        f"RK4 halving ratios {rk_ratios[0]:.1f}, {rk_ratios[1]:.1f} (>= 14), Strang halving ratio {strang:.2f} (4 +- 20%)",
    )
    assert ok


def test_criterion_9_determinism(report, tmp_path, capsys):
    mismatched = []
    for name in PRESETS:
        for d in ("a", "b"):
            cli.main(["--preset", name, "--out", str(tmp_path / d)])
        for f in sorted((tmp_path / "a").glob(f"{name}.*")):
            if f.read_bytes() != (tmp_path / "b" / f.name).read_bytes():
                mismatched.append(f.name)
    capsys.readouterr()
    files = len(list((tmp_path / "a").iterdir()))
    ok = not mismatched and files > 0
    report(9, "determinism", ok, f"{len(PRESETS)} presets, {files} artifacts, mismatches: {mismatched or 'none'}")
    assert ok
