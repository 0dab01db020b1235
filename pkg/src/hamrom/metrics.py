"""Error and energy diagnostics comparing reduced runs against the benchmark.

Two maximum-error flavors: the stacked two-field error used by the wave tests
(per-point Euclidean norm over both fields, all recorded times including the
initial one) and the scalar-field error used by the KdV tests (absolute
entrywise difference, initial time excluded - exactly the conventions of the
reported values).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .avf import Trajectory

__all__ = ["EnergyReport", "RomReport", "e_inf_scalar", "e_inf_wave", "energy_report"]


@dataclass
class RomReport:
    """One comparison row: error, energy behavior, and runtime of one ROM."""

    variant: str
    r: int
    mu: float
    e_inf: float
    energy_initial: float
    energy_final: float
    max_energy_drift: float
    energy_offset_vs_fom: float
    wall_ms: float
    failed: bool = False


def _check_compatible(fom: Trajectory, rom: Trajectory) -> None:
    if fom.states.shape[0] != rom.states.shape[0]:
        raise ValueError(
            f"trajectories live on different grids: "
            f"{fom.states.shape[0]} vs {rom.states.shape[0]} unknowns"
        )
    if fom.times.size != rom.times.size or not np.allclose(
        fom.times, rom.times, rtol=0.0, atol=1e-10
    ):
        raise ValueError("trajectories were recorded at different times")


def e_inf_wave(fom: Trajectory, rom: Trajectory) -> float:
    """Maximum two-field pointwise error over the recorded space-time grid.

    States must stack the two fields; the error at a grid point is the
    Euclidean norm of the per-field differences.  All recorded times count,
    including the initial one.
    """
    _check_compatible(fom, rom)
    if fom.states.shape[0] % 2:
        raise ValueError("two-field error needs an even (stacked) state dimension")
    n = fom.states.shape[0] // 2
    diff = rom.states - fom.states
    pointwise = np.sqrt(diff[:n] ** 2 + diff[n:] ** 2)
    return float(pointwise.max())


def e_inf_scalar(fom: Trajectory, rom: Trajectory) -> float:
    """Maximum absolute entrywise error over recorded times after the start.

    The initial column is excluded (the scalar-field benchmark convention);
    identical initial data would otherwise always contribute a zero.
    """
    _check_compatible(fom, rom)
    if fom.times.size < 2:
        raise ValueError("need at least one recorded time after the start")
    return float(np.abs(rom.states[:, 1:] - fom.states[:, 1:]).max())


@dataclass(frozen=True)
class EnergyReport:
    """Drift of the reduced energy plus its offset from the benchmark.

    ``drift`` is ``max_k |H_r(t_k) - H_r(t_0)|`` over every step; ``offset``
    is the initial discrepancy ``H_r(t_0) - H(t_0)`` and ``offset_mean`` the
    time-averaged one (they coincide when both series are flat).
    """

    drift: float
    offset: float
    offset_mean: float


def energy_report(rom_traj: Trajectory, fom_traj: Trajectory) -> EnergyReport:
    """Summarize the reduced energy series against the benchmark series."""
    hr = np.asarray(rom_traj.energies)
    h = np.asarray(fom_traj.energies)
    if hr.size == 0 or h.size == 0:
        raise ValueError("energy series are empty")
    if hr.size != h.size:
        raise ValueError("energy series have different lengths")
    drift = float(np.abs(hr - hr[0]).max())
    return EnergyReport(
        drift=drift,
        offset=float(hr[0] - h[0]),
        offset_mean=float(np.mean(hr - h)),
    )
