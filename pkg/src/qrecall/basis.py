"""Orthonormal bases of the one-party space and the entangled two-party basis.

Every orthonormal basis (b_i) of the n-dimensional space induces an
orthonormal basis of the n^2-dimensional two-party space whose elements are
built by multiplying the diagonal embedding of the constant function with
b_i and shifting the second slot by j:

    xi_{i,j} = (O_{b_i} x U_j) J 1,   closed form  xi_{i,j}(m, r) = b_i(m) [m = r + j].

The rank-1 projections onto these vectors are the measurements performed
during recognition; the contraction maps G_{i,j} carry the post-measurement
amplitude onto the memory space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotOrthonormalError
from .groupspace import (
    DEFAULT_TOL,
    AmplitudeVector,
    LinearMap,
    add_perm,
    _freeze,
)


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Orthonormal basis of the n-dimensional one-party space.

    Rows of ``vectors`` are the basis functions b_1, ..., b_n over G.
    """

    n: int
    vectors: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=np.complex128)
        if v.shape != (self.n, self.n):
            raise ValueError(f"expected a {self.n} x {self.n} matrix, got {v.shape}")
        object.__setattr__(self, "vectors", _freeze(v))

    @classmethod
    def delta(cls, n: int) -> "OrthonormalBasis":
        return cls(n, np.eye(n, dtype=np.complex128), "delta")

    @classmethod
    def fourier(cls, n: int) -> "OrthonormalBasis":
        """b_j(l) = n^{-1/2} exp(2 pi i j l / n); flat for every n."""
        j = np.arange(1, n + 1).reshape(-1, 1)
        l = np.arange(1, n + 1).reshape(1, -1)
        v = np.exp(2j * np.pi * j * l / n) / np.sqrt(n)
        return cls(n, v, "fourier")

    @classmethod
    def custom(
        cls, vectors, label: str = "custom", tol: float = DEFAULT_TOL
    ) -> "OrthonormalBasis":
        """Validated user basis; rejects non-orthonormal rows outright."""
        v = np.asarray(vectors, dtype=np.complex128)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"basis matrix must be square, got shape {v.shape}")
        n = v.shape[0]
        gram = v.conj() @ v.T
        dev = float(np.max(np.abs(gram - np.eye(n))))
        if dev > tol:
            raise NotOrthonormalError(
                f"basis rows are not orthonormal (max Gram deviation {dev:.3e})"
            )
        return cls(n, v, label)

    @property
    def flat(self) -> bool:
        """True when |b_j(l)|^2 = 1/n for all j, l (within tolerance)."""
        dev = np.max(np.abs(np.abs(self.vectors) ** 2 - 1.0 / self.n))
        return bool(dev <= DEFAULT_TOL)

    def vector(self, i: int) -> np.ndarray:
        """The i-th basis function (1-based), as a read-only array."""
        if not 1 <= i <= self.n:
            raise ValueError(f"basis index {i} outside {{1, ..., {self.n}}}")
        return self.vectors[i - 1]

    def amplitude_vector(self, i: int) -> AmplitudeVector:
        return AmplitudeVector(self.vector(i).copy(), self.n, 1)


def random_orthonormal(n: int, rng: np.random.Generator) -> OrthonormalBasis:
    """Random orthonormal basis from the QR factorization of a Gaussian matrix."""
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(a)
    # fix the QR phase ambiguity so the distribution is phase-uniform
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return OrthonormalBasis(n, q.T, "custom")


@dataclass(frozen=True, eq=False)
class EntangledBasisElement:
    """One element of the entangled two-party basis, with its (i, j) label."""

    i: int
    j: int
    vector: AmplitudeVector


def entangled_vector(basis: OrthonormalBasis, i: int, j: int) -> EntangledBasisElement:
    """The (i, j) element of the entangled two-party basis (unit norm)."""
    n = basis.n
    b = basis.vector(i)
    p = add_perm(n, j)
    xi = np.zeros((n, n), dtype=np.complex128)
    # xi(m, r) = b_i(m) with m = r + j; one nonzero per column
    xi[p, np.arange(n)] = b[p]
    return EntangledBasisElement(i, j, AmplitudeVector(xi, n, 2))


def measurement_projector(basis: OrthonormalBasis, i: int, j: int) -> LinearMap:
    """Rank-1 orthogonal projection onto the (i, j) entangled basis vector.

    The full family over all (i, j) sums to the identity on the two-party
    space.
    """
    xi = entangled_vector(basis, i, j).vector.data
    return LinearMap(np.outer(xi, xi.conj()), basis.n)


def apply_contraction(
    basis: OrthonormalBasis, i: int, j: int, phi: AmplitudeVector
) -> AmplitudeVector:
    """Contract a two-party vector to the memory space.

    Closed form: out(m) = conj(b_i(m + j)) * phi(m + j, m).  Linear in phi
    but not an isometry.
    """
    if phi.arity != 2:
        raise ValueError("contraction expects an arity-2 vector")
    n = basis.n
    b = basis.vector(i)
    p = add_perm(n, j)
    grid = phi.grid()
    out = b[p].conj() * grid[p, np.arange(n)]
    return AmplitudeVector(out, n, 1)


def contraction_norm_sq(
    basis: OrthonormalBasis, i: int, j: int, phi: AmplitudeVector
) -> float:
    """Squared norm of the contraction: sum_m |b_i(m+j)|^2 |phi(m+j, m)|^2."""
    n = basis.n
    b = basis.vector(i)
    p = add_perm(n, j)
    grid = phi.grid()
    return float(np.sum(np.abs(b[p]) ** 2 * np.abs(grid[p, np.arange(n)]) ** 2))


def entangled_gram(basis: OrthonormalBasis) -> np.ndarray:
    """Gram matrix of all n^2 entangled basis vectors (lexicographic (i, j)).

    Equals the identity for every orthonormal basis.
    """
    n = basis.n
    rows = np.empty((n * n, n * n), dtype=np.complex128)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            rows[(i - 1) * n + (j - 1)] = entangled_vector(basis, i, j).vector.data
    return rows.conj() @ rows.T
