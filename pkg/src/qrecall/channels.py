"""Channel families built from positive trace-class operators.

The basic channel conjugates a state by the multiplication operators of a
decomposition of tau and sums with the decomposition weights:

    apply_channel(tau, rho) = sum_k w_k O_{h_k} rho O_{h_k}*

The action depends only on the operator tau, not on which orthonormal
decomposition it is stored with.  Normalizing by the output trace gives the
state-to-state channel, defined on the states whose output trace is
positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidAmplitudesError,
    NotInvertibleError,
    OutsideDomainError,
)
from .groupspace import DEFAULT_TOL, AmplitudeVector, LinearMap, add_perm
from .states import DensityOperator, TraceClassOperator


@dataclass(frozen=True)
class ChannelDomainReport:
    """Output trace of the raw channel and whether normalization is defined."""

    trace_value: float
    in_domain: bool


def channel_matrix(tau: TraceClassOperator, m: np.ndarray) -> np.ndarray:
    """Raw channel action on a matrix, evaluated as the stored spectral sum."""
    return np.einsum(
        "k,ka,ab,kb->ab", tau.weights, tau.vectors, m, tau.vectors.conj(),
        optimize=True,
    )


def apply_channel(
    tau: TraceClassOperator, rho: TraceClassOperator
) -> TraceClassOperator:
    """Unnormalized channel action; positive and linear in rho."""
    if tau.dim != rho.dim:
        raise ValueError(f"dimension mismatch: {tau.dim} vs {rho.dim}")
    return TraceClassOperator.from_matrix(channel_matrix(tau, rho.matrix), n=rho.n)


def domain_report(
    tau: TraceClassOperator, rho: TraceClassOperator, tol: float = DEFAULT_TOL
) -> ChannelDomainReport:
    trace_value = float(np.trace(channel_matrix(tau, rho.matrix)).real)
    return ChannelDomainReport(trace_value, trace_value > tol)


def apply_normalized(
    tau: TraceClassOperator, rho: DensityOperator, tol: float = DEFAULT_TOL
) -> DensityOperator:
    """Normalized channel; raises OutsideDomainError when the trace vanishes."""
    out = channel_matrix(tau, rho.matrix)
    trace_value = float(np.trace(out).real)
    if trace_value <= tol:
        raise OutsideDomainError(
            f"channel output trace {trace_value:.3e} is not positive",
            trace_value=trace_value,
        )
    return DensityOperator.from_matrix(out / trace_value, n=rho.n)


def shift_channel(j: int, rho: DensityOperator) -> DensityOperator:
    """Unitary conjugation by the shift; trace and spectrum are preserved."""
    n = rho.n
    if not 1 <= j <= n:
        raise ValueError(f"shift index {j} outside {{1, ..., {n}}}")
    p = add_perm(n, j)
    return DensityOperator(
        rho.weights.copy(), rho.vectors[:, p], n=n, validate=False
    )


def is_unitary_channel(
    tau: TraceClassOperator, tol: float = DEFAULT_TOL
) -> tuple[bool, LinearMap | None]:
    """Whether the normalized channel of tau is a unitary conjugation.

    True exactly when tau is rank 1 on a vector of constant modulus; the
    implementing unitary is the multiplication operator scaled to modulus 1.
    """
    positive = tau.weights > tol
    if int(np.count_nonzero(positive)) != 1:
        return False, None
    b = tau.vectors[int(np.argmax(tau.weights))]
    n = b.size
    if float(np.max(np.abs(np.abs(b) ** 2 - 1.0 / n))) > tol:
        return False, None
    return True, LinearMap(np.sqrt(n) * np.diag(b), tau.n)


@dataclass(frozen=True, eq=False)
class MultiplicationChannel:
    """Channel wrapper around a fixed positive trace-class operator."""

    tau: TraceClassOperator

    def apply(self, rho: TraceClassOperator) -> TraceClassOperator:
        return apply_channel(self.tau, rho)

    def apply_normalized(
        self, rho: DensityOperator, tol: float = DEFAULT_TOL
    ) -> DensityOperator:
        return apply_normalized(self.tau, rho, tol)

    def domain(
        self, rho: TraceClassOperator, tol: float = DEFAULT_TOL
    ) -> ChannelDomainReport:
        return domain_report(self.tau, rho, tol)


def invert_pure_channel(h, tol: float = DEFAULT_TOL) -> MultiplicationChannel:
    """Inverse of the rank-1 multiplication channel of h.

    Returns the channel for g = c / h with c = min_k |h(k)|; composing the
    two normalized channels is the identity on states.  Amplitudes reaching
    zero admit no inverse.
    """
    data = h.data if isinstance(h, AmplitudeVector) else np.asarray(h, complex)
    mags = np.abs(data)
    c = float(np.min(mags))
    if c <= tol:
        raise NotInvertibleError(
            f"amplitude function reaches {c:.3e}; no inverse channel exists"
        )
    g = c / data
    return MultiplicationChannel(TraceClassOperator.from_vector(g))


@dataclass(frozen=True, eq=False)
class ShiftChannel:
    """Unitary shift channel with a fixed shift index."""

    j: int

    def apply(self, rho: DensityOperator) -> DensityOperator:
        return shift_channel(self.j, rho)


# ---------------------------------------------------------------------------
# branch splitting
# ---------------------------------------------------------------------------

def splitting_isometry(h, n: int | None = None, tol: float = DEFAULT_TOL) -> LinearMap:
    """Isometry into the doubled space {1, 2} x G (branch-major flattening).

    Branch 1 carries h * f, branch 2 carries sqrt(1 - |h|^2) * f, so the
    squared norms add up to |f|^2.  Requires |h(k)| <= 1 for all k and a
    nonzero h.
    """
    data = h.data if isinstance(h, AmplitudeVector) else np.asarray(h, complex)
    if n is None:
        n = data.size if not isinstance(h, AmplitudeVector) else h.n
    mags_sq = np.abs(data) ** 2
    if float(np.max(mags_sq)) > 1.0 + tol:
        raise InvalidAmplitudesError(
            f"|h(k)| reaches {float(np.sqrt(np.max(mags_sq))):.6f} > 1"
        )
    if float(np.linalg.norm(data)) <= tol:
        raise InvalidAmplitudesError("splitting needs a nonzero amplitude vector")
    t = np.zeros((2 * n, n), dtype=np.complex128)
    t[:n, :] = np.diag(data)
    t[n:, :] = np.diag(np.sqrt(np.clip(1.0 - mags_sq, 0.0, None)))
    return LinearMap(t, n)


def branch_channels(
    h, rho: DensityOperator, tol: float = DEFAULT_TOL
) -> tuple[DensityOperator | None, float, DensityOperator | None, float]:
    """Post-measurement states and probabilities of the two branch projections.

    Branch 1 is the normalized multiplication channel of h, branch 2 of
    sqrt(1 - |h|^2); the probabilities sum to 1.  A branch of vanishing
    probability carries no state.
    """
    t = splitting_isometry(h, n=rho.n, tol=tol).matrix
    n = rho.n
    big = t @ rho.matrix @ t.conj().T
    blocks = (big[:n, :n], big[n:, n:])
    out: list[DensityOperator | None] = []
    probs: list[float] = []
    for block in blocks:
        p = float(np.trace(block).real)
        probs.append(p)
        if p > tol:
            out.append(DensityOperator.from_matrix(block / p, n=n))
        else:
            out.append(None)
    return out[0], probs[0], out[1], probs[1]


@dataclass(frozen=True, eq=False)
class SplittingChannel:
    """Branch-splitting channel with a fixed amplitude function."""

    h: AmplitudeVector

    def isometry(self) -> LinearMap:
        return splitting_isometry(self.h)

    def branches(self, rho: DensityOperator):
        return branch_channels(self.h, rho)
