"""Positive operators and states with explicit spectral-style decompositions.

A TraceClassOperator stores a decomposition ``sum_k w_k |v_k><v_k|`` with
orthonormal ``v_k`` and nonnegative weights; a DensityOperator additionally
has unit trace.  Decompositions are padded with zero-weight vectors so they
always carry exactly dim terms, which keeps the bookkeeping aligned with the
spectral sums used by the channel formulas.

The stored decomposition is preserved as given (it is not canonicalized to
an eigendecomposition), so the same operator can legitimately carry two
different representations; every downstream channel formula is
representation independent and tests never compare eigenvectors directly.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import (
    NotHermitianError,
    NotOrthonormalError,
    NotPositiveError,
    NotUnitTraceError,
)
from .groupspace import DEFAULT_TOL, AmplitudeVector, LinearMap, _freeze, diag_isometry


def _as_array(vec) -> np.ndarray:
    if isinstance(vec, AmplitudeVector):
        return vec.data
    return np.asarray(vec, dtype=np.complex128).reshape(-1)


def _infer_n(dim: int, arity: int) -> int:
    n = round(dim ** (1.0 / arity))
    if n ** arity != dim:
        raise ValueError(f"dimension {dim} is not an arity-{arity} power")
    return n


def _complete_orthonormal(rows: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal completion of the given rows to a full basis of C^dim."""
    have = rows.shape[0]
    if have == dim:
        return np.empty((0, dim), dtype=np.complex128)
    complement = np.eye(dim) - rows.T @ rows.conj()
    _, evecs = np.linalg.eigh(complement)
    return np.ascontiguousarray(evecs[:, have:].T)


class TraceClassOperator:
    """Positive semidefinite operator ``sum_k w_k |v_k><v_k|``, any trace >= 0."""

    def __init__(
        self,
        weights,
        vectors,
        n: int | None = None,
        arity: int = 1,
        *,
        tol: float = DEFAULT_TOL,
        validate: bool = True,
    ):
        w = np.asarray(weights, dtype=float).reshape(-1).copy()
        v = np.asarray(vectors, dtype=np.complex128)
        if v.ndim != 2:
            raise ValueError(f"vectors must form a 2-D array, got shape {v.shape}")
        count, dim = v.shape
        if w.size != count:
            raise ValueError(f"{w.size} weights for {count} vectors")
        if count > dim:
            raise ValueError(f"{count} vectors in a {dim}-dimensional space")
        if n is None:
            n = _infer_n(dim, arity)
        elif n ** arity != dim:
            raise ValueError(f"vectors of length {dim} do not match n={n}, arity={arity}")
        if validate and count:
            wmin = float(np.min(w))
            if wmin < -tol:
                raise NotPositiveError(f"negative weight {wmin:.3e}")
            gram = v.conj() @ v.T
            dev = float(np.max(np.abs(gram - np.eye(count))))
            if dev > tol:
                raise NotOrthonormalError(
                    f"decomposition vectors are not orthonormal "
                    f"(max Gram deviation {dev:.3e})"
                )
        w = np.clip(w, 0.0, None)
        if count < dim:
            v = np.vstack([v, _complete_orthonormal(v, dim)])
            w = np.concatenate([w, np.zeros(dim - count)])
        order = np.argsort(-w, kind="stable")
        w = w[order]
        v = np.ascontiguousarray(v[order])
        self.weights = _freeze(w)
        self.vectors = _freeze(v)
        self.matrix = _freeze(np.einsum("k,ka,kb->ab", w, v, v.conj()))
        self.n = int(n)
        self.arity = int(arity)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_vector(cls, f, n: int | None = None) -> "TraceClassOperator":
        """Rank-1 positive operator |f><f| (trace = |f|^2)."""
        data = _as_array(f)
        nrm = float(np.linalg.norm(data))
        if nrm <= 0.0:
            raise NotPositiveError("rank-1 operator needs a nonzero vector")
        return cls([nrm ** 2], [data / nrm], n=n, validate=False)

    @classmethod
    def from_matrix(
        cls, m, n: int | None = None, arity: int = 1, tol: float = DEFAULT_TOL
    ) -> "TraceClassOperator":
        w, v = _spectral_of_matrix(m, tol)
        return cls(w, v, n=n, arity=arity, validate=False)

    @classmethod
    def identity(cls, n: int) -> "TraceClassOperator":
        return cls(np.ones(n), np.eye(n, dtype=np.complex128), n=n, validate=False)

    @classmethod
    def zero(cls, n: int) -> "TraceClassOperator":
        return cls(np.zeros(n), np.eye(n, dtype=np.complex128), n=n, validate=False)

    # -- accessors ---------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def spectral(self) -> list[tuple[float, np.ndarray]]:
        """The stored decomposition as (weight, vector) pairs."""
        return [(float(w), v) for w, v in zip(self.weights, self.vectors)]

    def trace(self) -> float:
        return float(np.sum(self.weights))

    def diag(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()

    def purity(self) -> float:
        return float(np.sum(self.weights ** 2))

    def linear_map(self) -> LinearMap:
        return LinearMap(self.matrix.copy(), self.n)


class DensityOperator(TraceClassOperator):
    """State: positive operator with unit trace."""

    def __init__(
        self,
        weights,
        vectors,
        n: int | None = None,
        arity: int = 1,
        *,
        tol: float = DEFAULT_TOL,
        validate: bool = True,
    ):
        w = np.asarray(weights, dtype=float).reshape(-1)
        total = float(np.sum(w))
        if abs(total - 1.0) > tol:
            raise NotUnitTraceError(f"weights sum to {total!r}, not 1")
        super().__init__(w / total, vectors, n, arity, tol=tol, validate=validate)

    # -- constructors ------------------------------------------------------

    @classmethod
    def pure(cls, f, n: int | None = None) -> "DensityOperator":
        """Pure state on the normalization of f; requires |f| > 0."""
        data = _as_array(f)
        nrm = float(np.linalg.norm(data))
        if nrm <= 0.0:
            raise NotPositiveError("pure state needs a nonzero vector")
        return cls([1.0], [data / nrm], n=n, validate=False)

    @classmethod
    def mixture(
        cls, weights, vectors, n: int | None = None, tol: float = DEFAULT_TOL
    ) -> "DensityOperator":
        v = np.asarray(vectors, dtype=np.complex128)
        return cls(weights, v, n=n, tol=tol, validate=True)

    @classmethod
    def from_matrix(
        cls, m, n: int | None = None, arity: int = 1, tol: float = DEFAULT_TOL
    ) -> "DensityOperator":
        w, v = _spectral_of_matrix(m, tol)
        total = float(np.sum(w))
        if abs(total - 1.0) > tol:
            raise NotUnitTraceError(f"trace is {total!r}, not 1")
        return cls(w, v, n=n, arity=arity, validate=False)

    @classmethod
    def maximally_mixed(cls, n: int) -> "DensityOperator":
        return cls(
            np.full(n, 1.0 / n), np.eye(n, dtype=np.complex128), n=n, validate=False
        )

    @classmethod
    def flat_pure(cls, n: int) -> "DensityOperator":
        """Pure state on the uniform unit vector; the no-prior-knowledge memory.

        Its expectation of any multiplication operator is the plain
        arithmetic mean of the multiplier.
        """
        return cls.pure(np.ones(n, dtype=np.complex128))

    @classmethod
    def delta_state(cls, n: int, k: int) -> "DensityOperator":
        return cls.pure(AmplitudeVector.delta(n, k))


def _spectral_of_matrix(m, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition with the clamp policy: [-tol, 0) -> 0, below is an error."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"operator matrix must be square, got shape {m.shape}")
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    evals, evecs = np.linalg.eigh((m + m.conj().T) / 2.0)
    low = float(np.min(evals))
    if low < -tol:
        raise NotPositiveError(f"negative eigenvalue {low:.3e}")
    return np.clip(evals, 0.0, None), evecs.T


# ---------------------------------------------------------------------------
# derived constructions
# ---------------------------------------------------------------------------

def entangle(gamma: DensityOperator) -> DensityOperator:
    """Entangled two-party state of a memory state: conjugation by the
    diagonal embedding.  Trace is preserved; the result is supported on the
    diagonal subspace spanned by the doubled delta vectors."""
    if gamma.arity != 1:
        raise ValueError("entanglement map expects a one-party state")
    j = diag_isometry(gamma.n).matrix
    return DensityOperator.from_matrix(
        j @ gamma.matrix @ j.conj().T, n=gamma.n, arity=2
    )


def three_party_input(rho: DensityOperator, gamma: DensityOperator) -> LinearMap:
    """The joint input state rho x e(gamma) on the three-party space.

    Identical to conjugating rho x gamma by (identity x diagonal embedding).
    """
    if rho.n != gamma.n:
        raise ValueError(f"dimension mismatch: {rho.n} vs {gamma.n}")
    if rho.arity != 1 or gamma.arity != 1:
        raise ValueError("three-party input expects one-party states")
    return LinearMap(np.kron(rho.matrix, entangle(gamma).matrix), rho.n)


def fidelity(a: DensityOperator, b: DensityOperator) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2, in [0, 1]."""
    if a.matrix.shape != b.matrix.shape:
        raise ValueError("fidelity needs states of equal dimension")
    root = np.einsum(
        "k,ka,kb->ab", np.sqrt(a.weights), a.vectors, a.vectors.conj()
    )
    inner = root @ b.matrix @ root
    mu = np.linalg.eigvalsh((inner + inner.conj().T) / 2.0)
    return float(np.sum(np.sqrt(np.clip(mu, 0.0, None))) ** 2)


def trace_distance(a: DensityOperator, b: DensityOperator) -> float:
    """Half the trace norm of the difference."""
    if a.matrix.shape != b.matrix.shape:
        raise ValueError("trace distance needs states of equal dimension")
    evals = np.linalg.eigvalsh(a.matrix - b.matrix)
    return float(0.5 * np.sum(np.abs(evals)))


def random_density_operator(
    n: int, rng: np.random.Generator, pure: bool = False
) -> DensityOperator:
    """Random state: Wishart-normalized when mixed, Gaussian ray when pure."""
    if pure:
        f = rng.normal(size=n) + 1j * rng.normal(size=n)
        return DensityOperator.pure(f)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = a @ a.conj().T
    m = m / np.trace(m).real
    return DensityOperator.from_matrix(m, n=n)
