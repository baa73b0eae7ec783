"""Named invariant suite driven by the verify command.

Each check pits an identity against an independently computed route and
reports the worst deviation seen.  Oracle-backed checks respect the dense
dimension guards and are skipped (reported as passed, with a note) above
them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import (
    OrthonormalBasis,
    entangled_gram,
    random_orthonormal,
)
from .channels import apply_channel, branch_channels, splitting_isometry
from .errors import OutcomeImpossibleError
from .groupspace import DEFAULT_TOL, AmplitudeVector
from .oracle import ORACLE_MAX_N, oracle_outcome, projected_state_discrepancy
from .states import DensityOperator, TraceClassOperator, random_density_operator
from .teleport import (
    IMPOSSIBLE_EPS,
    memory_state_direct,
    memory_state_factorized,
    outcome_probability,
)

#: Guard for the decomposition check (denser than the plain oracle).
_DECOMPOSITION_MAX_N = 8


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, deviation: float, tol: float) -> CheckResult:
    return CheckResult(name, deviation <= tol, f"max deviation {deviation:.3e}")


def _skip(name: str, reason: str) -> CheckResult:
    return CheckResult(name, True, f"skipped: {reason}")


def check_basis_orthonormality(bases, tol: float) -> CheckResult:
    worst = 0.0
    for basis in bases:
        gram = entangled_gram(basis)
        dev = float(np.max(np.abs(gram - np.eye(basis.n ** 2))))
        worst = max(worst, dev)
    return _result("entangled-basis-orthonormality", worst, tol)


def check_measured_state_decomposition(pairs, bases, tol: float) -> CheckResult:
    name = "measured-state-decomposition"
    n = bases[0].n
    if n > _DECOMPOSITION_MAX_N:
        return _skip(name, f"n={n} above dense guard {_DECOMPOSITION_MAX_N}")
    worst = 0.0
    for rho, gamma in pairs:
        for basis in bases:
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    dev = projected_state_discrepancy(rho, gamma, basis, i, j)
                    worst = max(worst, dev)
    return _result(name, worst, tol)


def check_memory_state_routes(pairs, bases, tol: float) -> tuple[CheckResult, CheckResult]:
    """Direct route against the oracle, then all three routes pairwise.

    Outcomes with probability above the reporting threshold must have all
    three routes defined and agreeing; outcomes at or below the algebraic
    tolerance must be reported impossible by all routes alike.
    """
    closed_name = "memory-state-closed-form"
    fact_name = "channel-factorization"
    n = bases[0].n
    if n > ORACLE_MAX_N:
        return _skip(closed_name, f"n={n} above dense guard {ORACLE_MAX_N}"), \
            _skip(fact_name, f"n={n} above dense guard {ORACLE_MAX_N}")
    worst_closed = 0.0
    worst_fact = 0.0
    verdicts_agree = True
    for rho, gamma in pairs:
        for basis in bases:
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    reference = oracle_outcome(rho, gamma, basis, i, j)
                    states = {}
                    for label, route in (
                        ("direct", memory_state_direct),
                        ("factorized", memory_state_factorized),
                    ):
                        try:
                            states[label] = route(rho, gamma, basis, i, j)
                        except OutcomeImpossibleError:
                            states[label] = None
                    states["oracle"] = reference.conditional_state
                    impossible = [k for k, v in states.items() if v is None]
                    if reference.probability > IMPOSSIBLE_EPS:
                        if impossible:
                            verdicts_agree = False
                            continue
                        ref = states["oracle"].matrix
                        worst_closed = max(
                            worst_closed,
                            float(np.linalg.norm(states["direct"].matrix - ref)),
                        )
                        worst_fact = max(
                            worst_fact,
                            float(np.linalg.norm(states["factorized"].matrix - ref)),
                            float(np.linalg.norm(
                                states["factorized"].matrix
                                - states["direct"].matrix
                            )),
                        )
                    elif reference.probability <= tol:
                        if len(impossible) != 3:
                            verdicts_agree = False
                    # probabilities between the two thresholds are not compared
    closed = _result(closed_name, worst_closed, tol)
    fact = _result(fact_name, worst_fact, tol)
    if not verdicts_agree:
        fact = CheckResult(
            fact_name, False, "impossibility verdicts differ between routes"
        )
    return closed, fact


def check_representation_independence(n, states, rng, tol: float) -> CheckResult:
    """Same degenerate operator under two decompositions, same channel action."""
    base = random_orthonormal(n, rng).vectors
    weights = np.full(n, 1.0 / n) if n < 2 else None
    if n >= 2:
        weights = rng.uniform(0.2, 1.0, size=n)
        weights[1] = weights[0]
    theta = rng.uniform(0.0, 2.0 * np.pi)
    rotation = np.array(
        [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
    )
    rotated = base.copy()
    if n >= 2:
        rotated[:2] = rotation @ base[:2]
    tau_a = TraceClassOperator(weights, base, n=n, validate=False)
    tau_b = TraceClassOperator(weights, rotated, n=n, validate=False)
    worst = float(np.max(np.abs(tau_a.matrix - tau_b.matrix)))
    for rho in states:
        out_a = apply_channel(tau_a, rho)
        out_b = apply_channel(tau_b, rho)
        worst = max(worst, float(np.max(np.abs(out_a.matrix - out_b.matrix))))
    return _result("representation-independence", worst, tol)


def check_probability_completeness(pairs, bases, tol: float) -> CheckResult:
    worst = 0.0
    for rho, gamma in pairs:
        for basis in bases:
            n = basis.n
            total = sum(
                outcome_probability(rho, gamma, basis, i, j)
                for i in range(1, n + 1)
                for j in range(1, n + 1)
            )
            worst = max(worst, abs(total - 1.0))
    return _result("probability-completeness", worst, tol)


def check_splitting_isometry(n, states, rng, tol: float) -> CheckResult:
    worst = 0.0
    for rho in states:
        h = rng.uniform(0.1, 1.0, size=n) * np.exp(
            2j * np.pi * rng.uniform(size=n)
        )
        t = splitting_isometry(AmplitudeVector(h, n, 1))
        f = rng.normal(size=n) + 1j * rng.normal(size=n)
        worst = max(worst, abs(
            float(np.linalg.norm(t.matrix @ f)) - float(np.linalg.norm(f))
        ))
        _, p1, _, p2 = branch_channels(AmplitudeVector(h, n, 1), rho)
        worst = max(worst, abs(p1 + p2 - 1.0))
    return _result("splitting-isometry", worst, tol)


def run_suite(
    n: int,
    pairs: list[tuple[DensityOperator, DensityOperator]],
    bases: list[OrthonormalBasis],
    tol: float,
    rng: np.random.Generator,
) -> list[CheckResult]:
    dense_pairs = pairs[: min(len(pairs), 10)]
    states = [rho for rho, _ in pairs[: min(len(pairs), 20)]]
    closed, fact = check_memory_state_routes(dense_pairs, bases, tol)
    return [
        check_basis_orthonormality(bases, tol),
        check_measured_state_decomposition(dense_pairs, bases, tol),
        closed,
        fact,
        check_representation_independence(n, states, rng, tol),
        check_probability_completeness(pairs, bases, tol),
        check_splitting_isometry(n, states, rng, tol),
    ]


def run_random(n: int, count: int, seed: int, tol: float = DEFAULT_TOL) -> list[CheckResult]:
    """Random-instance verification: count (rho, gamma) pairs at dimension n."""
    rng = np.random.default_rng(seed)
    bases = [
        OrthonormalBasis.delta(n),
        OrthonormalBasis.fourier(n),
        random_orthonormal(n, rng),
    ]
    pairs = [
        (random_density_operator(n, rng), random_density_operator(n, rng))
        for _ in range(count)
    ]
    return run_suite(n, pairs, bases, tol, rng)


def run_scenario(scenario) -> list[CheckResult]:
    """Verification pinned to a scenario's basis and states."""
    rng = np.random.default_rng(scenario.seed if scenario.seed is not None else 0)
    pairs = [(scenario.rho, scenario.gamma)]
    return run_suite(
        scenario.n, pairs, [scenario.basis], scenario.tolerance, rng
    )
