"""Dense three-party reference for outcome probabilities and memory states.

Deliberately naive: builds the full n^3-dimensional objects, conjugates with
explicit matrix products and reduces with partial traces.  Never reuses the
factorized shortcuts of the other modules, so agreement with them is a real
cross-check and not a tautology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import OrthonormalBasis, apply_contraction, measurement_projector
from .errors import DimensionTooLargeError, QRecallError
from .groupspace import DEFAULT_TOL, AmplitudeVector, LinearMap, diag_isometry, partial_trace, tensor
from .states import DensityOperator, entangle

#: Largest dimension for which the dense n^3 x n^3 objects stay desk-sized.
ORACLE_MAX_N = 12


@dataclass(frozen=True, eq=False)
class OracleResult:
    """Outcome probability with the conditional state, when defined.

    ``intermediate`` optionally retains the measured (unnormalized)
    three-party operator for diagnostics.
    """

    probability: float
    conditional_state: DensityOperator | None
    intermediate: np.ndarray | None = None


def _guard(n: int, limit: int) -> None:
    if n > limit:
        raise DimensionTooLargeError(
            f"dense route refused for n={n} (guard: n <= {limit})"
        )


def _partial_trace_sanity(proj: np.ndarray, n: int) -> None:
    """Check Tr_{1,2}(F x X) = Tr(F) X on a fixed dense X before trusting
    the reduction used for the conditional state."""
    x = (np.arange(n)[:, None] + 1.0) + 1j * (np.arange(n)[None, :] + 2.0)
    big = LinearMap(np.kron(proj, x), n)
    reduced = partial_trace(big, keep={3}).matrix
    expected = np.trace(proj) * x
    if float(np.max(np.abs(reduced - expected))) > 1e-9:
        raise QRecallError("partial-trace sanity identity failed")


def oracle_outcome(
    rho: DensityOperator, gamma: DensityOperator, basis: OrthonormalBasis,
    i: int, j: int, keep_intermediate: bool = False, tol: float = DEFAULT_TOL,
) -> OracleResult:
    """Reference evaluation of one outcome on the full three-party space.

    Builds the projected three-party operator both as rho x e(gamma) and as
    the conjugation of rho x gamma by (identity x diagonal embedding); the
    two constructions must agree.  The probability is the full trace, the
    conditional state the normalized partial trace onto the memory factor.
    """
    n = basis.n
    _guard(n, ORACLE_MAX_N)
    proj = measurement_projector(basis, i, j).matrix
    _partial_trace_sanity(proj, n)
    eye = np.eye(n, dtype=np.complex128)
    proj3 = np.kron(proj, eye)
    joint_a = np.kron(rho.matrix, entangle(gamma).matrix)
    embed = np.kron(eye, diag_isometry(n).matrix)
    joint_b = embed @ np.kron(rho.matrix, gamma.matrix) @ embed.conj().T
    if float(np.max(np.abs(joint_a - joint_b))) > 1e-9:
        raise QRecallError("three-party input constructions disagree")
    measured = proj3 @ joint_a @ proj3
    probability = float(np.trace(measured).real)
    conditional = None
    if probability > tol:
        reduced = partial_trace(LinearMap(measured, n), keep={3}).matrix
        conditional = DensityOperator.from_matrix(reduced / probability, n=n)
    return OracleResult(
        probability=probability,
        conditional_state=conditional,
        intermediate=measured if keep_intermediate else None,
    )


def projected_state_discrepancy(
    rho: DensityOperator, gamma: DensityOperator, basis: OrthonormalBasis,
    i: int, j: int,
) -> float:
    """Frobenius distance between the two constructions of the measured state.

    The conjugation route projects rho x e(gamma) with the measurement
    projector; the spectral-sum route tensors the projector with the
    weighted outer products of the contraction vectors.  Both describe the
    same operator.
    """
    n = basis.n
    _guard(n, 8)
    proj = measurement_projector(basis, i, j).matrix
    proj3 = np.kron(proj, np.eye(n, dtype=np.complex128))
    joint = np.kron(rho.matrix, entangle(gamma).matrix)
    lhs = proj3 @ joint @ proj3
    memory = np.zeros((n, n), dtype=np.complex128)
    for ak, gk in zip(rho.weights, rho.vectors):
        gk_vec = AmplitudeVector(gk.copy(), n, 1)
        for bl, hl in zip(gamma.weights, gamma.vectors):
            if ak * bl == 0.0:
                continue
            hl_vec = AmplitudeVector(hl.copy(), n, 1)
            v = apply_contraction(basis, i, j, tensor(gk_vec, hl_vec)).data
            memory += (ak * bl) * np.outer(v, v.conj())
    rhs = np.kron(proj, memory)
    return float(np.linalg.norm(lhs - rhs))
