"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
summary lines.  The fast property-based criteria (1-5) build their own small
systems; the benchmark-reproduction criteria (6-13) reuse the session-scoped
fixtures from conftest so the expensive full-order runs happen once.
"""

import numpy as np
import pytest

from hamrom.avf import AvfScheme, integrate
from hamrom.pod import (
    PodBasis,
    SnapshotSet,
    collect_snapshots,
    compute_basis,
    projection_error,
    sigma_tail,
)
from hamrom.avf import Trajectory
from hamrom.rom import RomVariant, reduce_operators, run_rom
from hamrom.systems import (
    DiagonalQuadratic,
    Grid1D,
    PolyGradFlow,
    build_wave_fom,
    eval_energy,
    eval_grad,
    polynomial_energy,
    wave_initial,
)

E_INF_TARGETS_WAVE_R5 = {
    RomVariant.GROM: 0.4591,
    RomVariant.SP0: 0.2606,
    RomVariant.SP1: 0.4138,
    RomVariant.SP2: 0.1526,
}
E_INF_TARGETS_KDV_R40 = {
    RomVariant.GROM: 0.02964,
    RomVariant.SP0: 0.0564,
    RomVariant.SP1: 0.050168,
    RomVariant.SP2: 0.036574,
}


def _report(criterion, text):
    print(f"PASS criterion {criterion}: {text}")


def _skew_quadratic_flow(rng, dim, structure):
    B = rng.standard_normal((dim, dim))
    G1 = B @ B.T / dim + 0.5 * np.eye(dim)
    g0 = 0.1 * rng.standard_normal(dim)
    coeff = 0.3
    tag = "skew" if np.abs(structure + structure.T).max() == 0 else "negative-semidefinite"
    return PolyGradFlow(
        structure=structure,
        linear=G1,
        constant=g0,
        quadratic=DiagonalQuadratic(coeff),
        energy=polynomial_energy(G1, g0, coeff),
        structure_tag=tag,
    )


def test_criterion_01_skew_projection():
    """Projected structure operators inherit skew-symmetry."""
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(4, 65))
        r = int(rng.integers(1, min(n, 8) + 1))
        A = rng.standard_normal((n, n))
        D = A - A.T
        Q, _ = np.linalg.qr(rng.standard_normal((n, r)))
        D_r = Q.T @ D @ Q
        worst = max(worst, np.abs(D_r + D_r.T).max() / np.abs(D).max())
    assert worst <= 1e-12
    _report(1, f"50 random projections; worst skew defect {worst:.2e} <= 1e-12 of |D|")


def test_criterion_02_projection_error_identity():
    """Squared projection error equals the squared singular-value tail."""
    worst_plain = 0.0
    for seed in range(20):
        rng = np.random.default_rng(200 + seed)
        n, m = int(rng.integers(8, 30)), int(rng.integers(4, 10))
        r = int(rng.integers(1, m))
        snaps = SnapshotSet(data=rng.standard_normal((n, m)), n_state=m)
        basis = compute_basis(snaps, r)
        gap = abs(projection_error(snaps, basis) - sigma_tail(basis, r))
        worst_plain = max(worst_plain, gap / (1.0 + sigma_tail(basis, 0)))
    assert worst_plain <= 1e-9

    # gradient-augmented sets: state error + mu^2 gradient error == tail
    worst_aug = 0.0
    for seed in range(20):
        rng = np.random.default_rng(300 + seed)
        dim, m = 12, 6
        A = rng.standard_normal((dim, dim))
        flow = _skew_quadratic_flow(rng, dim, 0.5 * (A - A.T))
        traj = Trajectory(
            times=np.arange(float(m)),
            states=rng.standard_normal((dim, m)),
            energies=np.zeros(m),
            steps_total=m - 1,
        )
        mu = float(rng.uniform(0.1, 1.0))
        snaps = collect_snapshots(traj, flow, mu=mu)
        r = int(rng.integers(1, m))
        basis = compute_basis(snaps, r)
        P = basis.phi @ basis.phi.T
        states = snaps.data[:, :m]
        grads = snaps.data[:, m:] / mu
        split = np.sum((states - P @ states) ** 2) + mu**2 * np.sum((grads - P @ grads) ** 2)
        gap = abs(split - sigma_tail(basis, r))
        worst_aug = max(worst_aug, gap / (1.0 + sigma_tail(basis, 0)))
    assert worst_aug <= 1e-9
    _report(2, f"identity gap {worst_plain:.2e} (plain), {worst_aug:.2e} (augmented)")


def test_criterion_03_avf_energy_behavior():
    """Energy conservation on skew systems, monotonicity on dissipative ones."""
    rng = np.random.default_rng(103)
    A = rng.standard_normal((6, 6))
    flow = _skew_quadratic_flow(rng, 6, 0.5 * (A - A.T))
    u0 = 0.2 * rng.standard_normal(6)
    traj = integrate(flow, u0, AvfScheme(dt=0.01, t_end=10.0, picard_tol=1e-12))
    assert traj.steps_total == 1000
    h = traj.energies
    drift = np.abs(h - h[0]).max() / (1.0 + abs(h[0]))
    assert drift <= 1e-9

    M = rng.standard_normal((6, 6))
    dflow = _skew_quadratic_flow(rng, 6, -(M @ M.T) / 6.0)
    dtraj = integrate(dflow, 0.2 * rng.standard_normal(6), AvfScheme(dt=0.01, t_end=10.0))
    hd = dtraj.energies
    assert np.all(np.diff(hd) <= 10 * 1e-12 * (1.0 + np.abs(hd[:-1])))
    _report(3, f"1000-step drift {drift:.2e} <= 1e-9; dissipative energy non-increasing")


def test_criterion_04_full_basis_recovery():
    """A full basis makes the structure-preserving reduction exact."""
    grid = Grid1D(n=16, length=1.0)
    flow = build_wave_fom(0.1, grid)
    u0 = wave_initial(grid)
    scheme = AvfScheme(dt=0.01, t_end=1.0, snapshot_stride=10)
    fom_traj = integrate(flow, u0, scheme)
    full = PodBasis(phi=np.eye(16), sigma=np.ones(16), r=16)
    model = reduce_operators(flow, (full, full), RomVariant.SP0)
    rom_traj = run_rom(model, scheme, initial_state=u0)
    gap = np.abs(rom_traj.states - fom_traj.states).max()
    assert gap <= 1e-9
    _report(4, f"16-point wave, 100 steps, full-basis gap {gap:.2e} <= 1e-9")


def test_criterion_05_gradient_consistency(kdv_system):
    """Finite differences of the energy match the gradient on the benchmark."""
    flow, _, grid = kdv_system
    rng = np.random.default_rng(105)
    eps = 1e-6
    worst = 0.0
    for _ in range(10):
        u = 0.5 * rng.standard_normal(flow.dim)
        w = rng.standard_normal(flow.dim)
        fd = (eval_energy(flow, u + eps * w) - eval_energy(flow, u - eps * w)) / (2 * eps)
        an = grid.dx * (eval_grad(flow, u) @ w)
        worst = max(worst, abs(fd - an) / abs(an))
    assert worst <= 1e-6
    _report(5, f"10 random directional derivatives, worst relative gap {worst:.2e}")


def test_criterion_06_wave_fom_energy(wave_dense):
    """Wave benchmark energy is the reported constant and stays flat."""
    h = wave_dense.energies
    drift = np.abs(h - h[0]).max()
    assert h[0] == pytest.approx(0.075, rel=0.01)
    assert drift <= 1e-9
    _report(6, f"H(0) = {h[0]:.6f} (0.075 +/- 1%), drift {drift:.2e} <= 1e-9")


def test_criterion_07_wave_table_r5(wave_table1, wave_dense):
    """Wave comparison at r=5: errors, energy behavior, and ordering."""
    e = {}
    for variant, target in E_INF_TARGETS_WAVE_R5.items():
        report, _ = wave_table1[variant]
        e[variant] = report.e_inf
        assert report.e_inf == pytest.approx(target, rel=0.10), variant.value
    grom = wave_table1[RomVariant.GROM][0]
    assert grom.max_energy_drift >= 1e-3
    sp0 = wave_table1[RomVariant.SP0][0]
    assert abs(sp0.energy_initial - 0.06788) <= 1e-3
    assert sp0.max_energy_drift <= 1e-9
    h0 = wave_dense.energies[0]
    for variant in (RomVariant.SP1, RomVariant.SP2):
        rep = wave_table1[variant][0]
        assert rep.max_energy_drift <= 1e-9
        assert abs(rep.energy_initial - h0) <= 1e-9  # initial energy captured
    assert e[RomVariant.SP2] < e[RomVariant.SP0] < e[RomVariant.SP1] < e[RomVariant.GROM]
    _report(
        7,
        "E_inf = {:.4f}/{:.4f}/{:.4f}/{:.4f} (G-ROM/SP0/SP1/SP2), all within 10%; "
        "ordering SP2 < SP0 < SP1 < G-ROM".format(
            e[RomVariant.GROM], e[RomVariant.SP0], e[RomVariant.SP1], e[RomVariant.SP2]
        ),
    )


def test_criterion_08_wave_r20(wave_r20, wave_table1):
    """Wave comparison at r=20: errors and the tiny energy offset."""
    grom, _ = wave_r20[RomVariant.GROM]
    sp0, _ = wave_r20[RomVariant.SP0]
    assert grom.e_inf == pytest.approx(0.0208, rel=0.10)
    assert sp0.e_inf == pytest.approx(0.0058, rel=0.15)
    assert sp0.energy_offset_vs_fom == pytest.approx(-2.6563e-7, rel=0.25)
    assert sp0.e_inf < wave_table1[RomVariant.SP0][0].e_inf  # error decreases with r
    _report(
        8,
        f"G-ROM {grom.e_inf:.4f} (0.0208 +/- 10%), SP0 {sp0.e_inf:.4f} (0.0058 +/- 15%), "
        f"offset {sp0.energy_offset_vs_fom:.4e} (-2.6563e-7 +/- 25%)",
    )


def test_criterion_09_kdv_fom_energy(kdv_dense):
    """KdV benchmark energy is the reported constant and stays flat."""
    h = kdv_dense.energies
    drift = np.abs(h - h[0]).max()
    assert h[0] == pytest.approx(-1.1317, rel=0.01)
    assert drift <= 1e-8
    assert kdv_dense.max_picard_iterations <= 10
    _report(
        9,
        f"H(0) = {h[0]:.6f} (-1.1317 +/- 1%), drift {drift:.2e} <= 1e-8, "
        f"max Picard iterations {kdv_dense.max_picard_iterations} <= 10",
    )


def test_criterion_10_kdv_table_r40(kdv_table2):
    """KdV comparison at r=40: errors, conservation, and the energy offset.

    Two sub-checks are known to sit just outside their stated bands with the
    pinned snapshot conventions (see notes/decisions.md): the plain-Galerkin
    error lands ~11% from its target and the SP0 offset at ~1.30x the
    reference, both within 1% of the band edge.  The tolerances are asserted
    as stated rather than widened.
    """
    failures = []
    e = {}
    for variant, target in E_INF_TARGETS_KDV_R40.items():
        report, _ = kdv_table2[variant]
        e[variant] = report.e_inf
        rel = abs(report.e_inf - target) / target
        status = "ok" if rel <= 0.10 else "OUT OF BAND"
        print(f"  criterion 10: {variant.value:9s} E_inf {report.e_inf:.6f} "
              f"target {target} rel {rel:+.2%} [{status}]")
        if rel > 0.10:
            failures.append(f"{variant.value} E_inf {report.e_inf:.6f} is {rel:.2%} from {target}")
    for variant in (RomVariant.SP1, RomVariant.SP2):
        drift = kdv_table2[variant][0].max_energy_drift
        print(f"  criterion 10: {variant.value} energy drift {drift:.2e} (<= 1e-10)")
        if drift > 1e-10:
            failures.append(f"{variant.value} drift {drift:.2e} > 1e-10")
    offset = abs(kdv_table2[RomVariant.SP0][0].energy_offset_vs_fom)
    rel = abs(offset - 3e-4) / 3e-4
    print(f"  criterion 10: SP0 |offset| {offset:.5e} vs 3e-4, rel {rel:+.2%} (<= 30%)")
    if rel > 0.30:
        failures.append(f"SP0 offset {offset:.5e} is {rel:.2%} from 3e-4 (band 30%)")
    assert not failures, "; ".join(failures) + " — see notes/decisions.md"
    _report(10, "all Table-2 values within stated tolerances")


def test_criterion_11_kdv_r60(kdv_r60, kdv_table2):
    """KdV comparison at r=60."""
    sp0, _ = kdv_r60[RomVariant.SP0]
    grom, _ = kdv_r60[RomVariant.GROM]
    assert sp0.e_inf == pytest.approx(7.3882e-4, rel=0.15)
    assert grom.e_inf == pytest.approx(2.4476e-3, rel=0.15)
    assert sp0.e_inf < kdv_table2[RomVariant.SP0][0].e_inf  # error decreases with r
    _report(
        11,
        f"SP0 {sp0.e_inf:.4e} (7.3882e-4 +/- 15%), G-ROM {grom.e_inf:.4e} (2.4476e-3 +/- 15%)",
    )


def test_criterion_12_mu_sweeps(wave_mu_rows, kdv_mu_rows):
    """Gradient-weight sweeps: wave optimum bracketed, KdV optimum at zero."""
    wave_rows, wave_seconds = wave_mu_rows
    assert len(wave_rows) == 51
    assert wave_seconds <= 600.0
    errs = np.array([err for _, err in wave_rows])
    mus = np.array([mu for mu, _ in wave_rows])
    best = int(np.nanargmin(errs))
    assert 0.04 <= mus[best] <= 0.12
    assert errs[best] == pytest.approx(0.2480, rel=0.10)

    kdv_errs = np.array([err for _, err in kdv_mu_rows])
    # the KdV curve is flat to ~1e-6 relative (translate-dominated snapshots;
    # see notes/decisions.md), so "minimum at zero" is asserted with a 1%
    # resolution rather than as a literal argmin over noise-level differences
    assert kdv_errs[0] <= np.nanmin(kdv_errs) * 1.01
    _report(
        12,
        f"wave argmin mu = {mus[best]:.3f} in [0.04, 0.12], min E = {errs[best]:.4f} "
        f"(0.2480 +/- 10%), 51 points in {wave_seconds:.0f}s; "
        f"KdV E(0) = {kdv_errs[0]:.5f} attains the sweep minimum (flat curve)",
    )


def test_criterion_13_tail_bound(wave_tail_rows):
    """Integrated squared error and spectral tail both shrink with the rank."""
    rs = [row[0] for row in wave_tail_rows]
    errs = np.array([row[1] for row in wave_tail_rows])
    tails = np.array([row[2] for row in wave_tail_rows])
    ratios = np.array([row[3] for row in wave_tail_rows])
    assert rs == [5, 10, 15, 20]
    assert np.all(np.diff(errs) < 0)
    assert np.all(np.diff(tails) < 0)
    assert np.all(np.isfinite(ratios))
    summary = ", ".join(f"r={r}: ratio {q:.3g}" for r, q in zip(rs, ratios))
    _report(13, f"both columns strictly decreasing; {summary}")
