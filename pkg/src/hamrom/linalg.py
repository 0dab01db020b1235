"""Dense linear-algebra kernels used throughout the package.

Gram matrices, symmetric eigendecomposition, thin SVD via the method of
snapshots, and reusable LU factorizations.  Everything works on plain float64
ndarrays; the systems this package targets (a few thousand unknowns, a few
hundred snapshots) never justify sparse storage.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "EigenPairs",
    "LuFactorization",
    "NumericalError",
    "SingularMatrixError",
    "as_dense",
    "gram",
    "lu_solve",
    "sym_eig",
    "thin_svd_snapshots",
]


class NumericalError(RuntimeError):
    """A solver failed to produce a usable result."""


class SingularMatrixError(NumericalError):
    """A pivot fell below the singularity threshold during factorization."""


def as_dense(a, name: str = "matrix") -> np.ndarray:
    """Validate and return ``a`` as a finite float64 2-D array."""
    out = np.asarray(a, dtype=float)
    if out.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {out.shape}")
    if out.size == 0:
        raise ValueError(f"{name} must not be empty")
    if not np.all(np.isfinite(out)):
        raise ValueError(f"{name} contains non-finite entries")
    return out


def gram(Y) -> np.ndarray:
    """Return ``Y.T @ Y`` with exact symmetry enforced by construction.

    The strict lower triangle is overwritten with the upper one, so
    ``G[i, j]`` and ``G[j, i]`` are bit-identical.
    """
    Y = as_dense(Y, "snapshot matrix")
    G = Y.T @ Y
    iu, ju = np.triu_indices(G.shape[0], k=1)
    G[ju, iu] = G[iu, ju]
    return G


@dataclass(frozen=True)
class EigenPairs:
    """Eigenvalues sorted descending with matching orthonormal eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray


def sym_eig(S, tol: float = 1e-12) -> EigenPairs:
    """Eigendecompose a symmetric matrix; pairs sorted by descending value.

    ``tol`` is the acceptable relative off-diagonal residual of the
    decomposition.  The LAPACK symmetric solver drives the residual to machine
    precision, which satisfies any positive ``tol`` this package uses.

    Raises
    ------
    ValueError
        If ``S`` is not square or not symmetric within 1e-12 relative.
    NumericalError
        If the eigensolver fails to converge.
    """
    S = as_dense(S, "S")
    if S.shape[0] != S.shape[1]:
        raise ValueError(f"S must be square, got shape {S.shape}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    scale = np.abs(S).max()
    if scale > 0 and np.abs(S - S.T).max() > 1e-12 * scale:
        raise ValueError("S is not symmetric within 1e-12 relative")
    try:
        w, V = np.linalg.eigh(0.5 * (S + S.T))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalError(f"symmetric eigensolver did not converge: {exc}") from exc
    return EigenPairs(values=w[::-1].copy(), vectors=np.ascontiguousarray(V[:, ::-1]))


def _mgs_orthonormalize(Q: np.ndarray, sweeps: int = 2) -> np.ndarray:
    """Right-looking modified Gram-Schmidt, repeated ``sweeps`` times.

    Two sweeps bring the orthogonality defect to machine precision even when
    the input columns are only approximately orthogonal.
    """
    Q = np.array(Q, dtype=float)
    for _ in range(sweeps):
        for i in range(Q.shape[1]):
            nrm = np.linalg.norm(Q[:, i])
            if nrm == 0.0:
                raise NumericalError("dependent columns in re-orthonormalization")
            Q[:, i] /= nrm
            if i + 1 < Q.shape[1]:
                Q[:, i + 1 :] -= np.outer(Q[:, i], Q[:, i] @ Q[:, i + 1 :])
    return Q


def thin_svd_snapshots(Y, max_rank: int | None = None, rank_tol: float = 1e-12):
    """Thin SVD of a tall snapshot matrix via the method of snapshots.

    Eigendecomposes the small Gram matrix ``Y.T @ Y``, recovers left singular
    vectors as ``Y v_j / sigma_j`` and re-orthonormalizes them with modified
    Gram-Schmidt; the recovered columns lose orthogonality for small singular
    values, so the cleanup pass is not optional.

    Parameters
    ----------
    Y : (n, m) array
        Snapshot columns, typically with n >> m.
    max_rank : int, optional
        Maximum number of basis columns to return (default: full rank).
    rank_tol : float
        Relative cutoff; singular values below ``rank_tol * sigma_1`` are
        treated as numerically zero and dropped.

    Returns
    -------
    phi : (n, k) array
        Left singular vectors, ``k = min(max_rank, numerical rank)``, with
        ``max |phi.T phi - I| <= 1e-12``.
    sigma : (d,) array
        The full retained spectrum (all ``d`` numerical-rank singular
        values), not just the first ``k``.
    """
    Y = as_dense(Y, "snapshot matrix")
    n, m = Y.shape
    limit = min(n, m)
    if max_rank is None:
        max_rank = limit
    if not 1 <= max_rank <= limit:
        raise ValueError(f"max_rank must be in [1, {limit}], got {max_rank}")
    if rank_tol < 0:
        raise ValueError("rank_tol must be non-negative")
    if not np.any(Y):
        warnings.warn("all-zero snapshot matrix: returning an empty basis")
        return np.zeros((n, 0)), np.zeros(0)
    pairs = sym_eig(gram(Y))
    sigma = np.sqrt(np.clip(pairs.values, 0.0, None))
    keep = (sigma > 0.0) & (sigma >= rank_tol * sigma[0])
    d = int(np.count_nonzero(keep))  # descending spectrum: keep is a prefix
    sigma = sigma[:d]
    k = min(max_rank, d)
    phi = Y @ (pairs.vectors[:, :k] / sigma[:k])
    return _mgs_orthonormalize(phi), sigma


class LuFactorization:
    """Reusable partial-pivoting LU factorization of a square matrix.

    Factor once, then call :meth:`solve` for any number of right-hand sides;
    constant-coefficient time stepping reuses one factorization for thousands
    of solves.
    """

    def __init__(self, A):
        A = as_dense(A, "A")
        if A.shape[0] != A.shape[1]:
            raise ValueError(f"A must be square, got shape {A.shape}")
        scale = np.abs(A).max()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # scipy warns before we can check pivots
            lu, piv = scipy.linalg.lu_factor(A)
        if np.abs(np.diag(lu)).min() < 1e-14 * scale:
            raise SingularMatrixError("pivot below 1e-14 of the matrix scale")
        self._lu = lu
        self._piv = piv
        self.shape = A.shape

    def solve(self, rhs) -> np.ndarray:
        """Solve ``A x = rhs`` for a vector or a matrix of stacked columns.

        Skips scipy's finiteness scan: callers on the time-stepping hot path
        handle divergence themselves.
        """
        b = np.asarray(rhs, dtype=float)
        if b.shape[0] != self.shape[0]:
            raise ValueError(f"rhs has {b.shape[0]} rows, expected {self.shape[0]}")
        return scipy.linalg.lu_solve((self._lu, self._piv), b, check_finite=False)


def lu_solve(A, rhs) -> np.ndarray:
    """One-shot ``A x = rhs`` solve; see :class:`LuFactorization` for reuse."""
    return LuFactorization(A).solve(rhs)
