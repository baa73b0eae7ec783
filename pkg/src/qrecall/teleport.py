"""The recognition channel: outcome probabilities and memory updates.

Measuring the entangled two-party basis on the joint input rho x e(gamma)
yields one of n^2 outcomes.  For each outcome (i, j) the conditional memory
state can be evaluated three ways:

* ``memory_state_factorized`` - the fast route: normalized conjugation by
  the conjugate-basis multiplication operator, a cyclic shift, then the
  memory channel of gamma.  O(n^3) per outcome; the default.
* ``memory_state_direct``     - the spectral-sum route over the contraction
  vectors of all decomposition terms of rho and gamma.
* ``oracle.oracle_outcome``   - the dense three-party reference (separate
  module), O(n^6).

All three agree on every outcome of positive probability, and they agree on
which outcomes are impossible.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .basis import OrthonormalBasis, apply_contraction
from .channels import channel_matrix
from .errors import NonFlatBasisError, OutcomeImpossibleError
from .groupspace import DEFAULT_TOL, AmplitudeVector, LinearMap, add_perm, tensor
from .states import DensityOperator

#: Probability at or below which an outcome is reported impossible.  This is
#: a reporting threshold, deliberately looser than the algebraic tolerance:
#: normalizing by a numerically meaningless denominator helps nobody.
IMPOSSIBLE_EPS = 1e-6


@dataclass(frozen=True)
class MeasurementOutcome:
    """One measurement outcome with its opaque label and probability."""

    i: int
    j: int
    label: str
    probability: float


def outcome_label(i: int, j: int) -> str:
    return f"z[{i},{j}]"


def outcome_probability(
    rho: DensityOperator, gamma: DensityOperator, basis: OrthonormalBasis,
    i: int, j: int,
) -> float:
    """Probability of measuring outcome (i, j).

    Closed form: sum_m |b_i(m+j)|^2 rho(m+j, m+j) gamma(m, m), which only
    involves the diagonals; the probabilities over all n^2 outcomes sum
    to 1.
    """
    n = basis.n
    b = basis.vector(i)
    p = add_perm(n, j)
    weight = np.abs(b[p]) ** 2
    return float(np.sum(weight * rho.diag()[p] * gamma.diag()))


def memory_state_direct(
    rho: DensityOperator, gamma: DensityOperator, basis: OrthonormalBasis,
    i: int, j: int, tol: float = DEFAULT_TOL,
) -> DensityOperator:
    """Post-measurement memory state via the spectral-sum representation.

    Sums the weighted outer products of the contraction vectors of every
    decomposition term pair; the denominator is the matching sum of squared
    norms.
    """
    n = basis.n
    num = np.zeros((n, n), dtype=np.complex128)
    denom = 0.0
    for ak, gk in zip(rho.weights, rho.vectors):
        if ak <= 0.0:
            continue
        gk_vec = AmplitudeVector(gk.copy(), n, 1)
        for bl, hl in zip(gamma.weights, gamma.vectors):
            if bl <= 0.0:
                continue
            hl_vec = AmplitudeVector(hl.copy(), n, 1)
            v = apply_contraction(basis, i, j, tensor(gk_vec, hl_vec)).data
            denom += ak * bl * float(np.vdot(v, v).real)
            num += (ak * bl) * np.outer(v, v.conj())
    if denom <= tol:
        raise OutcomeImpossibleError(
            f"outcome ({i},{j}) has probability {denom:.3e}", probability=denom
        )
    return DensityOperator.from_matrix(num / denom, n=n)


def memory_state_factorized(
    rho: DensityOperator, gamma: DensityOperator, basis: OrthonormalBasis,
    i: int, j: int, tol: float = DEFAULT_TOL,
) -> DensityOperator:
    """Post-measurement memory state via the channel factorization.

    Normalized conjugation by the conjugate-basis multiplication operator,
    then the shift by j, then the normalized memory channel of gamma.
    O(n^3) per outcome versus O(n^6) for the dense reference route.
    """
    n = basis.n
    b = basis.vector(i)
    # conjugation by the multiplication operator of conj(b_i)
    sigma = b.conj()[:, None] * rho.matrix * b[None, :]
    t1 = float(np.trace(sigma).real)
    if t1 <= tol:
        raise OutcomeImpossibleError(
            f"outcome ({i},{j}): input state is orthogonal to basis vector {i} "
            f"(trace {t1:.3e})",
            probability=t1,
        )
    sigma = sigma / t1
    p = add_perm(n, j)
    sigma = sigma[np.ix_(p, p)]
    out = channel_matrix(gamma, sigma)
    t2 = float(np.trace(out).real)
    if t2 <= tol:
        raise OutcomeImpossibleError(
            f"outcome ({i},{j}): shifted state is outside the memory-channel "
            f"domain (trace {t2:.3e})",
            probability=t1 * t2,
        )
    return DensityOperator.from_matrix(out / t2, n=n)


ROUTES = {
    "direct": memory_state_direct,
    "factorized": memory_state_factorized,
}


def unitary_key(
    basis: OrthonormalBasis, i: int, j: int, gamma: DensityOperator,
    tol: float = DEFAULT_TOL,
) -> LinearMap | None:
    """Unitary V with memory state = V rho V* for every admissible rho.

    Exists exactly when gamma is pure on a vector of constant modulus (the
    flat pure memory, of which the no-prior-knowledge state is the special
    case); requires a flat basis.  Mixed memories such as the maximally
    mixed state admit no key.
    """
    if not basis.flat:
        raise NonFlatBasisError(
            f"basis {basis.label!r} is not flat; unitary keys need "
            f"constant-modulus basis entries"
        )
    n = basis.n
    if abs(float(gamma.weights[0]) - 1.0) > tol:
        return None
    h = gamma.vectors[0]
    if float(np.max(np.abs(np.abs(h) ** 2 - 1.0 / n))) > tol:
        return None
    b = basis.vector(i)
    shift = np.zeros((n, n), dtype=np.complex128)
    shift[np.arange(n), add_perm(n, j)] = 1.0
    v = n * (np.diag(h) @ shift @ np.diag(b.conj()))
    return LinearMap(v, n)


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """All n^2 outcomes with conditional memory states where defined.

    Outcomes are kept in lexicographic (i, j) order; outcomes at or below
    the reporting threshold are flagged impossible and carry no state.
    """

    n: int
    outcomes: tuple[MeasurementOutcome, ...]
    states: dict[tuple[int, int], DensityOperator]
    route: str
    impossible_eps: float = IMPOSSIBLE_EPS

    def probability(self, i: int, j: int) -> float:
        return self.outcomes[(i - 1) * self.n + (j - 1)].probability

    def is_possible(self, i: int, j: int) -> bool:
        return self.probability(i, j) > self.impossible_eps

    def state(self, i: int, j: int) -> DensityOperator | None:
        return self.states.get((i, j))

    def probability_matrix(self) -> np.ndarray:
        return np.array(
            [o.probability for o in self.outcomes], dtype=float
        ).reshape(self.n, self.n)

    def total_probability(self) -> float:
        return float(sum(o.probability for o in self.outcomes))


def outcome_distribution(
    rho: DensityOperator, gamma: DensityOperator, basis: OrthonormalBasis,
    route: str = "factorized", tol: float = DEFAULT_TOL,
    impossible_eps: float = IMPOSSIBLE_EPS, jobs: int = 1,
) -> OutcomeDistribution:
    """Sweep all n^2 outcomes; states are evaluated for possible outcomes.

    Per-outcome work is independent, so it may fan out over ``jobs`` worker
    threads; assembly order is always lexicographic in (i, j).
    """
    n = basis.n
    evaluate = ROUTES[route]
    outcomes = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            prob = outcome_probability(rho, gamma, basis, i, j)
            outcomes.append(MeasurementOutcome(i, j, outcome_label(i, j), prob))
    total = sum(o.probability for o in outcomes)
    if abs(total - 1.0) > 1e-8:
        raise ValueError(f"outcome probabilities sum to {total!r}, not 1")
    possible = [
        (o.i, o.j) for o in outcomes if o.probability > impossible_eps
    ]

    def compute(cell: tuple[int, int]) -> DensityOperator:
        return evaluate(rho, gamma, basis, cell[0], cell[1], tol)

    if jobs > 1 and len(possible) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            states = dict(zip(possible, pool.map(compute, possible)))
    else:
        states = {cell: compute(cell) for cell in possible}
    return OutcomeDistribution(
        n=n,
        outcomes=tuple(outcomes),
        states=states,
        route=route,
        impossible_eps=impossible_eps,
    )


def recognize(
    rho: DensityOperator, gamma: DensityOperator, basis: OrthonormalBasis,
    seed: int, count: int, route: str = "factorized", tol: float = DEFAULT_TOL,
    dist: OutcomeDistribution | None = None,
) -> list[tuple[MeasurementOutcome, DensityOperator | None]]:
    """Sample ``count`` recognition events i.i.d. from the outcome distribution.

    Draws use a counter-based generator, so the sequence is a pure function
    of (seed, draw index) and identical across runs.  Each sampled outcome is
    paired with its conditional memory state.
    """
    if dist is None:
        dist = outcome_distribution(rho, gamma, basis, route=route, tol=tol)
    probs = np.array([o.probability for o in dist.outcomes], dtype=float)
    cumulative = np.cumsum(probs)
    gen = np.random.Generator(np.random.Philox(seed))
    draws = gen.random(count)
    indices = np.minimum(
        np.searchsorted(cumulative, draws, side="right"), probs.size - 1
    )
    cache: dict[tuple[int, int], DensityOperator | None] = dict(dist.states)
    evaluate = ROUTES[route]
    events: list[tuple[MeasurementOutcome, DensityOperator | None]] = []
    for flat in indices:
        outcome = dist.outcomes[int(flat)]
        cell = (outcome.i, outcome.j)
        if cell not in cache:
            try:
                cache[cell] = evaluate(rho, gamma, basis, outcome.i, outcome.j, tol)
            except OutcomeImpossibleError:
                cache[cell] = None
        events.append((outcome, cache[cell]))
    return events
