"""Cyclic-group arithmetic and dense linear algebra over G, G^2 and G^3.

The one-, two- and three-party state spaces are the complex function spaces
over G = {1, ..., n}, G x G and G x G x G with the counting measure.  Vectors
are stored flat in row-major (k, l, m) order; operators are dense complex
matrices.  Group elements are 1-based with n acting as the neutral element
(residue 0 is written as n); 0-based residues are an internal detail only.

All values are immutable after construction and every operation is a pure
function, so everything here is safe to share across concurrent tasks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ModulusMismatchError

#: Default absolute tolerance for equality / positivity checks.
DEFAULT_TOL = 1e-10


# ---------------------------------------------------------------------------
# group arithmetic
# ---------------------------------------------------------------------------

def add_mod(k: int, l: int, n: int) -> int:
    """k + l on {1..n}, cyclic: (k + l) mod n with residue 0 written as n."""
    return (k + l - 1) % n + 1


def sub_mod(k: int, l: int, n: int) -> int:
    """Inverse of :func:`add_mod`: k - l, plus n whenever k <= l."""
    return (k - l - 1) % n + 1


def add_perm(n: int, j: int) -> np.ndarray:
    """0-based permutation p with p[m-1] = (m + j cyclic) - 1."""
    return (np.arange(n) + j) % n


def sub_perm(n: int, j: int) -> np.ndarray:
    """0-based permutation p with p[m-1] = (m - j cyclic) - 1."""
    return (np.arange(n) - j) % n


@dataclass(frozen=True)
class GroupIndex:
    """Element of the cyclic group {1, ..., n} with modulus n."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        if not 1 <= self.value <= self.modulus:
            raise ValueError(
                f"value {self.value} outside {{1, ..., {self.modulus}}}"
            )

    def plus(self, other: "GroupIndex") -> "GroupIndex":
        return group_add(self, other)

    def minus(self, other: "GroupIndex") -> "GroupIndex":
        return group_sub(self, other)


def _check_modulus(k: GroupIndex, l: GroupIndex) -> int:
    if k.modulus != l.modulus:
        raise ModulusMismatchError(
            f"moduli differ: {k.modulus} vs {l.modulus}"
        )
    return k.modulus


def group_add(k: GroupIndex, l: GroupIndex) -> GroupIndex:
    """Cyclic sum of two group elements; the neutral element is n."""
    n = _check_modulus(k, l)
    return GroupIndex(add_mod(k.value, l.value, n), n)


def group_sub(k: GroupIndex, l: GroupIndex) -> GroupIndex:
    """Cyclic difference; (k - l) + l = k for all k, l."""
    n = _check_modulus(k, l)
    return GroupIndex(sub_mod(k.value, l.value, n), n)


# ---------------------------------------------------------------------------
# vectors
# ---------------------------------------------------------------------------

def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class AmplitudeVector:
    """Complex function on G, G^2 or G^3, stored flat in row-major order.

    The squared norm is the plain sum of |amplitude|^2 (counting measure).
    """

    data: np.ndarray
    n: int
    arity: int

    def __post_init__(self):
        if self.arity not in (1, 2, 3):
            raise ValueError(f"arity must be 1, 2 or 3, got {self.arity}")
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")
        data = np.asarray(self.data, dtype=np.complex128).reshape(-1)
        if data.size != self.n ** self.arity:
            raise ValueError(
                f"expected {self.n ** self.arity} amplitudes, got {data.size}"
            )
        object.__setattr__(self, "data", _freeze(data))

    @classmethod
    def delta(cls, n: int, k: int) -> "AmplitudeVector":
        """The k-th canonical unit function on G (1-based)."""
        data = np.zeros(n, dtype=np.complex128)
        data[k - 1] = 1.0
        return cls(data, n, 1)

    @classmethod
    def ones(cls, n: int) -> "AmplitudeVector":
        """The constant function with value 1 everywhere."""
        return cls(np.ones(n, dtype=np.complex128), n, 1)

    @property
    def dim(self) -> int:
        return self.data.size

    def grid(self) -> np.ndarray:
        """Read-only view shaped (n,) * arity."""
        return self.data.reshape((self.n,) * self.arity)

    def amp(self, *indices: int) -> complex:
        """Amplitude at a tuple of 1-based group indices."""
        if len(indices) != self.arity:
            raise ValueError(f"expected {self.arity} indices, got {len(indices)}")
        flat = 0
        for idx in indices:
            if not 1 <= idx <= self.n:
                raise ValueError(f"index {idx} outside {{1, ..., {self.n}}}")
            flat = flat * self.n + (idx - 1)
        return complex(self.data[flat])

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def inner(self, other: "AmplitudeVector") -> complex:
        """<self, other> with conjugation on the left argument."""
        if (self.n, self.arity) != (other.n, other.arity):
            raise ValueError("inner product needs vectors over the same space")
        return complex(np.vdot(self.data, other.data))

    def tensor(self, other: "AmplitudeVector") -> "AmplitudeVector":
        return tensor(self, other)


def tensor(v: AmplitudeVector, w: AmplitudeVector) -> AmplitudeVector:
    """Tensor product (v x w)(k, l) = v(k) w(l), row-major index order."""
    if v.n != w.n:
        raise ValueError(f"dimension mismatch: {v.n} vs {w.n}")
    arity = v.arity + w.arity
    if arity > 3:
        raise ValueError(f"combined arity {arity} exceeds 3")
    return AmplitudeVector(np.kron(v.data, w.data), v.n, arity)


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LinearMap:
    """Dense linear operator between the function spaces over G, G^2, G^3.

    The matrix is stored with codomain rows and domain columns.  Dimensions
    need not be powers of n (the branch-splitting isometry maps into the
    doubled space {1,2} x G); arity properties return None in that case.
    """

    matrix: np.ndarray
    n: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2:
            raise ValueError(f"operator matrix must be 2-D, got shape {m.shape}")
        object.__setattr__(self, "matrix", _freeze(m))

    @classmethod
    def identity(cls, n: int, arity: int = 1) -> "LinearMap":
        return cls(np.eye(n ** arity, dtype=np.complex128), n)

    @property
    def codomain_dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def domain_dim(self) -> int:
        return self.matrix.shape[1]

    def _arity_of(self, dim: int) -> int | None:
        for a in (1, 2, 3):
            if dim == self.n ** a:
                return a
        return None

    @property
    def domain_arity(self) -> int | None:
        return self._arity_of(self.domain_dim)

    @property
    def codomain_arity(self) -> int | None:
        return self._arity_of(self.codomain_dim)

    def adjoint(self) -> "LinearMap":
        return LinearMap(self.matrix.conj().T, self.n)

    def trace(self) -> complex:
        if self.codomain_dim != self.domain_dim:
            raise ValueError("trace of a non-square operator")
        return complex(np.trace(self.matrix))

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        if not isinstance(other, LinearMap):
            return NotImplemented
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
        if self.domain_dim != other.codomain_dim:
            raise ValueError(
                f"cannot compose: domain {self.domain_dim} vs codomain "
                f"{other.codomain_dim}"
            )
        return LinearMap(self.matrix @ other.matrix, self.n)

    def apply(self, vec):
        """Apply to an AmplitudeVector (or raw array).

        Returns an AmplitudeVector when the codomain is one of the spaces
        over G, G^2, G^3, otherwise the raw result array.
        """
        data = vec.data if isinstance(vec, AmplitudeVector) else np.asarray(vec)
        if data.shape != (self.domain_dim,):
            raise ValueError(
                f"vector of length {data.shape} does not match domain "
                f"{self.domain_dim}"
            )
        out = self.matrix @ data
        arity = self.codomain_arity
        if arity is None:
            return out
        return AmplitudeVector(out, self.n, arity)

    def is_unitary(self, tol: float = DEFAULT_TOL) -> bool:
        if self.codomain_dim != self.domain_dim:
            return False
        gram = self.matrix.conj().T @ self.matrix
        return bool(np.max(np.abs(gram - np.eye(self.domain_dim))) <= tol)


def mult_op(g: AmplitudeVector) -> LinearMap:
    """Operator of multiplication by g: (O_g f)(k) = g(k) f(k).

    The adjoint is multiplication by the conjugate; the map is unitary
    exactly when |g(k)| = 1 for every k.
    """
    if g.arity != 1:
        raise ValueError("multiplication operators are built from arity-1 vectors")
    return LinearMap(np.diag(g.data), g.n)


def shift_op(k, n: int | None = None) -> LinearMap:
    """Shift unitary (U_k f)(m) = f(k + m cyclic); U_n is the identity."""
    if isinstance(k, GroupIndex):
        k, n = k.value, k.modulus
    if n is None:
        raise ValueError("shift_op needs the group dimension")
    if not 1 <= k <= n:
        raise ValueError(f"shift index {k} outside {{1, ..., {n}}}")
    u = np.zeros((n, n), dtype=np.complex128)
    u[np.arange(n), add_perm(n, k)] = 1.0
    return LinearMap(u, n)


def diag_isometry(n: int) -> LinearMap:
    """The isometry J from G-functions into G^2-functions, (Jf)(k,l) = f(k) d_{k,l}."""
    j = np.zeros((n * n, n), dtype=np.complex128)
    for k in range(n):
        j[k * n + k, k] = 1.0
    return LinearMap(j, n)


def diag_embed(f: AmplitudeVector) -> AmplitudeVector:
    """Apply the diagonal embedding J to an arity-1 vector; norm preserving."""
    if f.arity != 1:
        raise ValueError("diagonal embedding expects an arity-1 vector")
    out = np.zeros((f.n, f.n), dtype=np.complex128)
    np.fill_diagonal(out, f.data)
    return AmplitudeVector(out, f.n, 2)


def diag_restrict(phi: AmplitudeVector) -> AmplitudeVector:
    """The adjoint of the diagonal embedding: (J* Phi)(k) = Phi(k, k)."""
    if phi.arity != 2:
        raise ValueError("diagonal restriction expects an arity-2 vector")
    return AmplitudeVector(phi.grid().diagonal().copy(), phi.n, 1)


def kron(a: LinearMap, b: LinearMap) -> LinearMap:
    """Kronecker product consistent with the row-major vector flattening."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    da = a.domain_arity
    db = b.domain_arity
    ca = a.codomain_arity
    cb = b.codomain_arity
    if None not in (da, db) and da + db > 3:
        raise ValueError(f"combined domain arity {da + db} exceeds 3")
    if None not in (ca, cb) and ca + cb > 3:
        raise ValueError(f"combined codomain arity {ca + cb} exceeds 3")
    return LinearMap(np.kron(a.matrix, b.matrix), a.n)


def partial_trace(m: LinearMap, keep) -> "LinearMap | complex":
    """Partial trace of an operator on the three-party space.

    keep={3} traces out the first two components and returns an n x n map;
    keep={} (empty) returns the scalar full trace.
    """
    keep = frozenset(keep)
    n = m.n
    if m.matrix.shape != (n ** 3, n ** 3):
        raise ValueError("partial trace expects an operator on the arity-3 space")
    if keep == frozenset({3}):
        six = m.matrix.reshape(n, n, n, n, n, n)
        return LinearMap(np.einsum("ijaijb->ab", six), n)
    if keep == frozenset():
        return complex(np.trace(m.matrix))
    raise ValueError(f"unsupported keep-set {set(keep)}; use {{3}} or {{}}")
