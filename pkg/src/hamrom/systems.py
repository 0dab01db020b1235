"""Semi-discrete Hamiltonian systems on uniform periodic 1D grids.

Builds the finite-difference operators, benchmark initial data, and energy
functionals for the linear wave and KdV test systems, packaged as
polynomial-gradient flows

    du/dt = S (g0 + G1 u + G2(u, u)),

the single representation shared by full-order and reduced-order models.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

__all__ = [
    "DiagonalQuadratic",
    "Grid1D",
    "PolyGradFlow",
    "ProjectedQuadratic",
    "TensorQuadratic",
    "build_kdv_fom",
    "build_wave_fom",
    "central_diff_matrix",
    "eval_energy",
    "eval_grad",
    "kdv_initial",
    "laplacian_matrix",
    "polynomial_energy",
    "wave_initial",
]

STRUCTURE_TAGS = ("skew", "negative-semidefinite", "none")


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid: ``n`` nodes covering ``length`` units.

    Nodes sit at ``origin + dx, ..., origin + length``; the left endpoint is
    identified with the right one by periodicity.
    """

    n: int
    length: float
    origin: float = 0.0

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("grid needs at least 3 points for the stencils")
        if not self.length > 0:
            raise ValueError("grid length must be positive")

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def points(self) -> np.ndarray:
        return self.origin + self.dx * np.arange(1, self.n + 1)


@dataclass(frozen=True)
class DiagonalQuadratic:
    """Entrywise quadratic gradient term: ``G2(u, v)_i = coeff * u_i * v_i``."""

    coeff: float

    def eval(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.coeff * u * v


@dataclass(frozen=True)
class TensorQuadratic:
    """Dense quadratic term ``G2(a, b)_p = sum_ij T[p, i, j] a_i b_j``.

    The tensor must be symmetric in its last two indices; full symmetry in all
    three is not required (plain Galerkin reductions break it).
    """

    tensor: np.ndarray

    def __post_init__(self):
        T = self.tensor
        if T.ndim != 3 or T.shape[1] != T.shape[2] or T.shape[0] != T.shape[1]:
            raise ValueError(f"tensor must be (r, r, r), got {T.shape}")
        scale = np.abs(T).max()
        if scale > 0 and np.abs(T - T.transpose(0, 2, 1)).max() > 1e-12 * scale:
            raise ValueError("tensor is not symmetric in its last two indices")

    def eval(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (self.tensor @ b) @ a


@dataclass(frozen=True)
class ProjectedQuadratic:
    """On-the-fly reduced quadratic term: ``left @ (coeff * (B a) * (B b))``.

    Cross-check path for the precomputed reduced tensor: same contract as
    :class:`TensorQuadratic` without the r^3 storage, at the cost of two
    basis applications per evaluation.
    """

    left: np.ndarray
    basis: np.ndarray
    coeff: float

    def eval(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.left @ (self.coeff * (self.basis @ a) * (self.basis @ b))


QuadraticTerm = Union[DiagonalQuadratic, TensorQuadratic, ProjectedQuadratic]


@dataclass(frozen=True)
class PolyGradFlow:
    """Finite-dimensional flow ``du/dt = S (g0 + G1 u + G2(u, u))``.

    ``structure`` is S, ``linear`` the symmetric operator G1, ``constant`` the
    optional g0, ``quadratic`` the optional degree-2 term, and ``energy`` maps
    a state to the conserved (or dissipated) functional value.

    ``structure_tag`` records what is known about S: ``"skew"`` flows conserve
    the energy under AVF stepping, ``"negative-semidefinite"`` flows dissipate
    it, and ``"none"`` drops the gradient-flow interpretation entirely (plain
    Galerkin reduced systems), in which case ``linear`` need not be symmetric.
    """

    structure: np.ndarray
    linear: np.ndarray
    energy: Callable[[np.ndarray], float]
    constant: Optional[np.ndarray] = None
    quadratic: Optional[QuadraticTerm] = None
    structure_tag: str = "none"

    def __post_init__(self):
        S, G1 = self.structure, self.linear
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise ValueError(f"structure operator must be square, got {S.shape}")
        n = S.shape[0]
        if G1.shape != (n, n):
            raise ValueError(f"linear operator must be {(n, n)}, got {G1.shape}")
        if self.constant is not None and self.constant.shape != (n,):
            raise ValueError("constant term has the wrong length")
        if self.structure_tag not in STRUCTURE_TAGS:
            raise ValueError(f"unknown structure_tag {self.structure_tag!r}")
        s_scale = np.abs(S).max()
        if self.structure_tag == "skew" and s_scale > 0:
            if np.abs(S + S.T).max() > 1e-13 * s_scale:
                raise ValueError("structure operator is not skew-symmetric")
        if self.structure_tag != "none":
            g_scale = np.abs(G1).max()
            if g_scale > 0 and np.abs(G1 - G1.T).max() > 1e-13 * g_scale:
                raise ValueError("linear gradient operator is not symmetric")
        if isinstance(self.quadratic, TensorQuadratic):
            if self.quadratic.tensor.shape[0] != n:
                raise ValueError("quadratic tensor dimension mismatch")

    @property
    def dim(self) -> int:
        return self.structure.shape[0]


def _as_state(u, dim: int) -> np.ndarray:
    out = np.asarray(u, dtype=float)
    if out.shape != (dim,):
        raise ValueError(f"state must have shape ({dim},), got {out.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError("state contains non-finite entries")
    return out


def eval_grad(flow: PolyGradFlow, u) -> np.ndarray:
    """Gradient ``g0 + G1 u + G2(u, u)`` of the flow's generating functional."""
    u = _as_state(u, flow.dim)
    g = flow.linear @ u
    if flow.constant is not None:
        g = g + flow.constant
    if flow.quadratic is not None:
        g = g + flow.quadratic.eval(u, u)
    return g


def eval_energy(flow: PolyGradFlow, u) -> float:
    """Energy functional of the flow evaluated at state ``u``."""
    return float(flow.energy(_as_state(u, flow.dim)))


def polynomial_energy(
    linear: np.ndarray,
    constant: Optional[np.ndarray] = None,
    quad_coeff: float = 0.0,
    weight: float = 1.0,
) -> Callable[[np.ndarray], float]:
    """Closed-form energy whose gradient is ``g0 + G1 u + coeff * u * u``.

    Returns ``u -> weight * (g0.u + u.G1 u / 2 + coeff/3 * sum u^3)``; handy
    for small synthetic systems where no bespoke energy formula exists.
    """

    def energy(u: np.ndarray) -> float:
        val = 0.5 * (u @ (linear @ u))
        if constant is not None:
            val += constant @ u
        if quad_coeff:
            val += (quad_coeff / 3.0) * np.sum(u**3)
        return float(weight * val)

    return energy


def central_diff_matrix(grid: Grid1D) -> np.ndarray:
    """Periodic central first-derivative matrix (entries ±1/(2 dx)), exactly
    skew-symmetric with zero row sums."""
    n, h = grid.n, grid.dx
    M = np.zeros((n, n))
    i = np.arange(n)
    M[i, (i + 1) % n] = 1.0 / (2.0 * h)
    M[i, (i - 1) % n] = -1.0 / (2.0 * h)
    return M


def laplacian_matrix(grid: Grid1D, scale: float = 1.0) -> np.ndarray:
    """Periodic three-point second-derivative matrix times ``scale``.

    Exactly symmetric, negative semidefinite for positive ``scale``, with
    zero row sums (constants are annihilated).
    """
    n, h = grid.n, grid.dx
    M = np.zeros((n, n))
    i = np.arange(n)
    M[i, i] = -2.0 * scale / h**2
    M[i, (i + 1) % n] = scale / h**2
    M[i, (i - 1) % n] = scale / h**2
    return M


def build_wave_fom(c: float, grid: Grid1D) -> PolyGradFlow:
    """Linear wave benchmark ``u_tt = c^2 u_xx`` as a canonical-structure flow.

    The state stacks the two fields: entries ``[:n]`` are the displacement u,
    entries ``[n:]`` the velocity v.  The energy is the dx-weighted discrete
    integral of ``v^2/2 + c^2 u_x^2 / 2`` (forward differences), which equals
    the quadratic form ``dx * x.G1 x / 2`` of the stacked gradient operator.
    """
    if c <= 0:
        raise ValueError("wave speed must be positive")
    n, h = grid.n, grid.dx
    lap = laplacian_matrix(grid, c * c)
    S = np.zeros((2 * n, 2 * n))
    S[:n, n:] = np.eye(n)
    S[n:, :n] = -np.eye(n)
    G1 = np.zeros((2 * n, 2 * n))
    G1[:n, :n] = -lap
    G1[n:, n:] = np.eye(n)

    def energy(x: np.ndarray) -> float:
        u, v = x[:n], x[n:]
        du = (np.roll(u, -1) - u) / h
        return float(h * (0.5 * (v @ v) + 0.5 * c * c * (du @ du)))

    return PolyGradFlow(structure=S, linear=G1, energy=energy, structure_tag="skew")


def build_kdv_fom(alpha: float, rho: float, nu: float, grid: Grid1D) -> PolyGradFlow:
    """KdV benchmark ``u_t = alpha u u_x + rho u_x + nu u_xxx`` in flow form.

    The structure operator is the central first-derivative matrix; the
    gradient splits into ``G1 = rho I + nu B`` (B the periodic Laplacian) and
    the entrywise quadratic ``(alpha/2) u^2``.  The energy is the dx-weighted
    sum of ``alpha/6 u^3 + rho/2 u^2 - nu/2 (forward-difference u)^2``, whose
    exact gradient is the vector field above.
    """
    n, h = grid.n, grid.dx
    S = central_diff_matrix(grid)
    G1 = rho * np.eye(n) + nu * laplacian_matrix(grid)
    quad = DiagonalQuadratic(alpha / 2.0) if alpha != 0.0 else None

    def energy(u: np.ndarray) -> float:
        du = (np.roll(u, -1) - u) / h
        return float(
            h
            * (
                (alpha / 6.0) * np.sum(u**3)
                + (rho / 2.0) * (u @ u)
                - (nu / 2.0) * (du @ du)
            )
        )

    return PolyGradFlow(
        structure=S, linear=G1, energy=energy, quadratic=quad, structure_tag="skew"
    )


def _cubic_bump(s: np.ndarray) -> np.ndarray:
    """Compactly supported cubic spline bump: 1 at s=0, zero for s >= 2."""
    s = np.asarray(s, dtype=float)
    return np.where(
        s <= 1.0,
        1.0 - 1.5 * s**2 + 0.75 * s**3,
        np.where(s <= 2.0, 0.25 * (2.0 - s) ** 3, 0.0),
    )


def wave_initial(grid: Grid1D) -> np.ndarray:
    """Benchmark wave start state: cubic bump at midspan, zero velocity.

    The grid must cover [0, 1]; the bump is ``h(10 |x - 1/2|)`` with the cubic
    spline profile ``h``.
    """
    if abs(grid.origin) > 1e-12 or abs(grid.length - 1.0) > 1e-12:
        raise ValueError("wave benchmark initial data expects the unit interval")
    u0 = _cubic_bump(10.0 * np.abs(grid.points - 0.5))
    return np.concatenate([u0, np.zeros(grid.n)])


def kdv_initial(grid: Grid1D) -> np.ndarray:
    """Benchmark KdV start state: the soliton profile ``sech^2(x / sqrt 2)``."""
    x = grid.points
    return 1.0 / np.cosh(x / np.sqrt(2.0)) ** 2
