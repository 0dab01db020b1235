"""Reduced-order model construction by Galerkin projection.

Four variants share one code path:

* ``GROM``   - plain Galerkin reduction ``da/dt = Phi^T S grad(Phi a)``; the
  projected operator is folded into the gradient side, so the reduced flow
  carries no structure guarantee.
* ``SP0``    - structure-preserving reduction with the projected structure
  operator ``S_r = Phi^T S Phi``, which inherits skew-symmetry (or negative
  semidefiniteness) and therefore conserves (or dissipates) the energy.
* ``SP1``    - SP reduction on a basis enriched with the initial-state
  residual, so the initial energy is captured exactly.
* ``SP2``    - SP reduction on a shifted-snapshot basis with the affine ansatz
  ``u = u0 + Phi a`` and zero initial coefficients.

Two-field (wave) systems pass a pair of per-field bases; the stacked
block-diagonal basis runs through the same machinery and reproduces the
two-by-two reduced block structure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg

from .avf import AvfScheme, Trajectory, integrate
from .pod import PodBasis
from .systems import (
    DiagonalQuadratic,
    PolyGradFlow,
    ProjectedQuadratic,
    TensorQuadratic,
)

__all__ = ["ReducedModel", "RomVariant", "decode", "encode", "reduce_operators", "run_rom"]


class RomVariant(enum.Enum):
    """The four reduced-model flavors."""

    GROM = "G-ROM"
    SP0 = "SP-ROM-0"
    SP1 = "SP-ROM-1"
    SP2 = "SP-ROM-2"

    @classmethod
    def parse(cls, text: str) -> "RomVariant":
        key = str(text).strip()
        for member in cls:
            if key.upper() == member.name or key == member.value:
                return member
        raise ValueError(f"unknown ROM variant {text!r}")


@dataclass(frozen=True)
class ReducedModel:
    """A reduced flow plus the maps between full and reduced coordinates.

    ``basis_matrix`` is the (block-diagonal) stack of the basis columns;
    ``decode_offset`` is the affine shift of the ansatz (the initial state for
    shifted-basis models, absent otherwise).
    """

    flow: PolyGradFlow
    bases: tuple[PodBasis, ...]
    variant: RomVariant
    fom: PolyGradFlow
    basis_matrix: np.ndarray
    decode_offset: Optional[np.ndarray] = None

    @property
    def fom_dim(self) -> int:
        return self.basis_matrix.shape[0]

    @property
    def reduced_dim(self) -> int:
        return self.basis_matrix.shape[1]


def encode(model: ReducedModel, u) -> np.ndarray:
    """Reduced coefficients of a full state: ``Phi^T (u - offset)``."""
    u = np.asarray(u, dtype=float)
    if u.shape != (model.fom_dim,):
        raise ValueError(f"state must have shape ({model.fom_dim},), got {u.shape}")
    if model.decode_offset is not None:
        u = u - model.decode_offset
    return model.basis_matrix.T @ u


def decode(model: ReducedModel, a) -> np.ndarray:
    """Full state of reduced coefficients: ``offset + Phi a``."""
    a = np.asarray(a, dtype=float)
    if a.shape != (model.reduced_dim,):
        raise ValueError(f"coefficients must have shape ({model.reduced_dim},), got {a.shape}")
    u = model.basis_matrix @ a
    if model.decode_offset is not None:
        u = u + model.decode_offset
    return u


def _symmetrized(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.T)


def _reduced_quadratic(left: np.ndarray, phi: np.ndarray, coeff: float,
                       precompute: bool):
    """Project an entrywise quadratic term: ``left @ (coeff (phi a)(phi b))``.

    Precomputed form: ``T[p, i, j] = coeff * sum_m left[p, m] phi[m, i] phi[m, j]``,
    stored dense with the (i, j) symmetry enforced exactly.
    """
    if not precompute:
        return ProjectedQuadratic(left=left, basis=phi, coeff=coeff)
    n, r = phi.shape
    W = (phi[:, :, None] * phi[:, None, :]).reshape(n, r * r)
    T = (coeff * (left @ W)).reshape(left.shape[0], r, r)
    T = 0.5 * (T + T.transpose(0, 2, 1))
    return TensorQuadratic(np.ascontiguousarray(T))


def reduce_operators(
    fom: PolyGradFlow,
    basis: Union[PodBasis, Sequence[PodBasis]],
    variant: RomVariant,
    precompute_tensor: bool = True,
) -> ReducedModel:
    """Assemble the reduced operators of ``fom`` for the requested variant.

    ``basis`` is a single basis or a per-field pair (stacked two-field
    systems).  ``precompute_tensor=False`` keeps the reduced quadratic term in
    on-the-fly form for cross-checking the dense tensor path.

    Raises ``ValueError`` on variant/basis mismatches: SP1 needs
    enrichment-processed bases, SP2 needs shifted-snapshot bases, and shifted
    bases are rejected everywhere else.
    """
    bases = (basis,) if isinstance(basis, PodBasis) else tuple(basis)
    if not bases:
        raise ValueError("at least one basis is required")
    if variant is RomVariant.SP1 and not all(b.enriched for b in bases):
        raise ValueError("SP-ROM-1 requires enrichment-processed bases")
    if variant is RomVariant.SP2:
        if any(b.shifted_reference is None for b in bases):
            raise ValueError("SP-ROM-2 requires bases built from shifted snapshots")
    elif any(b.shifted_reference is not None for b in bases):
        raise ValueError(f"shifted-snapshot bases are only valid for SP-ROM-2, not {variant.value}")

    phi = bases[0].phi if len(bases) == 1 else scipy.linalg.block_diag(*(b.phi for b in bases))
    if phi.shape[0] != fom.dim:
        raise ValueError(
            f"stacked basis has {phi.shape[0]} rows, full model has dimension {fom.dim}"
        )

    quad = fom.quadratic
    if quad is not None and not isinstance(quad, DiagonalQuadratic):
        raise ValueError("only entrywise (diagonal) quadratic terms can be reduced")
    coeff = quad.coeff if quad is not None else 0.0

    offset = None
    if variant is RomVariant.GROM:
        left = phi.T @ fom.structure
        structure = np.eye(phi.shape[1])
        linear = left @ fom.linear @ phi
        constant = left @ fom.constant if fom.constant is not None else None
        quadratic = _reduced_quadratic(left, phi, coeff, precompute_tensor) if coeff else None
        tag = "none"
    else:
        s_r = phi.T @ fom.structure @ phi
        if fom.structure_tag == "skew":
            s_r = 0.5 * (s_r - s_r.T)  # make the inherited skew-symmetry exact
        structure = s_r
        tag = fom.structure_tag
        quadratic = _reduced_quadratic(phi.T, phi, coeff, precompute_tensor) if coeff else None
        if variant is RomVariant.SP2:
            offset = np.concatenate([b.shifted_reference for b in bases])
            grad_at_offset = fom.linear @ offset
            if fom.constant is not None:
                grad_at_offset = grad_at_offset + fom.constant
            full_linear = fom.linear
            if coeff:
                grad_at_offset = grad_at_offset + quad.eval(offset, offset)
                full_linear = fom.linear + 2.0 * coeff * np.diag(offset)
            constant = phi.T @ grad_at_offset
            linear = _symmetrized(phi.T @ full_linear @ phi)
        else:
            constant = phi.T @ fom.constant if fom.constant is not None else None
            linear = _symmetrized(phi.T @ fom.linear @ phi)

    if offset is None:
        def reduced_energy(a, _phi=phi, _energy=fom.energy):
            return _energy(_phi @ a)
    else:
        def reduced_energy(a, _phi=phi, _energy=fom.energy, _off=offset):
            return _energy(_off + _phi @ a)

    flow = PolyGradFlow(
        structure=structure,
        linear=linear,
        energy=reduced_energy,
        constant=constant,
        quadratic=quadratic,
        structure_tag=tag,
    )
    return ReducedModel(
        flow=flow,
        bases=bases,
        variant=variant,
        fom=fom,
        basis_matrix=phi,
        decode_offset=offset,
    )


def run_rom(model: ReducedModel, scheme: AvfScheme, initial_state=None) -> Trajectory:
    """Integrate the reduced flow and return the decoded trajectory.

    ``initial_state`` is the full-order start state; it may be omitted for
    shifted-basis models, whose reduced start is the zero coefficient vector.
    The result records decoded full states at the recording times and the
    reduced energy series (full-order energy of the decoded state) at every
    step.
    """
    if initial_state is None:
        if model.decode_offset is None:
            raise ValueError("initial_state is required for non-shifted models")
        a0 = np.zeros(model.reduced_dim)
    else:
        a0 = encode(model, initial_state)
    reduced = integrate(model.flow, a0, scheme)
    states = model.basis_matrix @ reduced.states
    if model.decode_offset is not None:
        states = states + model.decode_offset[:, None]
    return Trajectory(
        times=reduced.times,
        states=states,
        energies=reduced.energies,
        steps_total=reduced.steps_total,
        max_picard_iterations=reduced.max_picard_iterations,
    )
