"""Command-line front end: probs, evolve, verify, sample, bench.

Exit codes: 0 success, 2 schema violation or unusable request, 3 state
validation failure, 4 impossible outcome, 5 failed verification invariants.
Every error path writes a single machine-parseable reason line first on
stderr.  Primary outputs are byte-identical across runs for fixed inputs
and seeds (bench timing values excepted).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    DimensionTooLargeError,
    OutcomeImpossibleError,
    SchemaError,
    ValidationError,
)
from .basis import OrthonormalBasis
from .oracle import ORACLE_MAX_N, oracle_outcome
from .report import (
    bench_table,
    probability_table,
    render_bench_times,
    render_probability_heatmap,
    render_sample_frequencies,
    sample_table,
    tally_events,
)
from .scenario import Scenario, load_scenario
from .states import random_density_operator
from .teleport import (
    ROUTES,
    outcome_distribution,
    outcome_probability,
    recognize,
)
from .verify import run_random, run_scenario

_BENCH_SEED = 20240801


def _default_jobs() -> int:
    raw = os.environ.get("QRECALL_JOBS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _fail(code: int, reason: str, message) -> int:
    print(f"{reason}: {message}", file=sys.stderr)
    return code


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _figure_dir(arg: str | None) -> Path | None:
    if arg is None:
        return None
    path = Path(arg)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _complex_pairs(matrix: np.ndarray):
    return [
        [[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(matrix)
    ]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_probs(args) -> int:
    scenario = load_scenario(args.scenario)
    dist = outcome_distribution(
        scenario.rho, scenario.gamma, scenario.basis,
        route="factorized", tol=scenario.tolerance, jobs=args.jobs,
    )
    text = probability_table(scenario, dist).render()
    _emit(text, args.out)
    figures = _figure_dir(args.figures)
    if figures is not None:
        render_probability_heatmap(dist, figures / "probs_heatmap.png")
    return 0


def _cmd_evolve(args) -> int:
    scenario = load_scenario(args.scenario)
    n = scenario.n
    if not (1 <= args.i <= n and 1 <= args.j <= n):
        raise SchemaError(f"outcome indices ({args.i},{args.j}) outside 1..{n}")
    probability = outcome_probability(
        scenario.rho, scenario.gamma, scenario.basis, args.i, args.j
    )
    if args.route == "oracle":
        result = oracle_outcome(
            scenario.rho, scenario.gamma, scenario.basis, args.i, args.j,
            tol=scenario.tolerance,
        )
        if result.conditional_state is None:
            raise OutcomeImpossibleError(
                f"outcome ({args.i},{args.j}) has probability "
                f"{result.probability:.3e}",
                probability=result.probability,
            )
        state = result.conditional_state
    else:
        state = ROUTES[args.route](
            scenario.rho, scenario.gamma, scenario.basis, args.i, args.j,
            scenario.tolerance,
        )
    document = {
        "i": args.i,
        "j": args.j,
        "n": n,
        "route": args.route,
        "probability": probability,
        "state": {
            "matrix": _complex_pairs(state.matrix),
            "spectral": {
                "weights": [float(w) for w in state.weights],
                "vectors": [
                    [[float(z.real), float(z.imag)] for z in vec]
                    for vec in state.vectors
                ],
            },
        },
    }
    _emit(json.dumps(document, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_verify(args) -> int:
    if (args.scenario is None) == (args.random is None):
        raise SchemaError("verify needs a scenario file or --random N COUNT SEED")
    if args.random is not None:
        n, count, seed = args.random
        if n < 1 or count < 1:
            raise SchemaError(f"--random needs n >= 1 and count >= 1, got {n}, {count}")
        results = run_random(n, count, seed)
    else:
        scenario = load_scenario(args.scenario)
        results = run_scenario(scenario)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"E_VERIFY: failed={','.join(failed)}", file=sys.stderr)
    lines = [
        f"{'PASS' if r.passed else 'FAIL'} {r.name} ({r.detail})" for r in results
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return 5 if failed else 0


def _cmd_sample(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.count < 0:
        raise SchemaError(f"--count must be >= 0, got {args.count}")
    seed = args.seed
    if seed is None:
        seed = scenario.seed if scenario.seed is not None else 0
    dist = outcome_distribution(
        scenario.rho, scenario.gamma, scenario.basis,
        route="factorized", tol=scenario.tolerance, jobs=args.jobs,
    )
    events = recognize(
        scenario.rho, scenario.gamma, scenario.basis, seed, args.count,
        tol=scenario.tolerance, dist=dist,
    )
    counts = tally_events(events, dist.n)
    text = sample_table(scenario, dist, events, seed, counts).render()
    _emit(text, args.out)
    figures = _figure_dir(args.figures)
    if figures is not None:
        render_sample_frequencies(
            dist, counts, len(events), figures / "sample_frequencies.png"
        )
    return 0


def _bench_states(n: int):
    rng = np.random.default_rng(_BENCH_SEED + n)
    return random_density_operator(n, rng), random_density_operator(n, rng)


def _cmd_bench(args) -> int:
    try:
        n_list = [int(x) for x in args.n_list.split(",") if x]
        route_list = [x.strip() for x in args.route_list.split(",") if x.strip()]
    except ValueError as exc:
        raise SchemaError(f"bad --n-list: {exc}") from exc
    if not n_list or not route_list:
        raise SchemaError("bench needs nonempty --n-list and --route-list")
    known = set(ROUTES) | {"oracle"}
    for route in route_list:
        if route not in known:
            raise SchemaError(f"unknown route {route!r}; choose from {sorted(known)}")
    for n in n_list:
        if n < 1:
            raise SchemaError(f"bench dimensions must be >= 1, got {n}")
    rows = []
    skipped = []
    for n in n_list:
        basis = OrthonormalBasis.fourier(n)
        rho, gamma = _bench_states(n)
        cells = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
        for route in route_list:
            if route == "oracle" and n > ORACLE_MAX_N:
                skipped.append((n, route, "dimension-guard"))
                continue

            if route == "oracle":
                def evaluate(cell):
                    return oracle_outcome(rho, gamma, basis, cell[0], cell[1])
            else:
                fn = ROUTES[route]

                def evaluate(cell, fn=fn):
                    return fn(rho, gamma, basis, cell[0], cell[1])

            reps = min(len(cells), 4 if route == "oracle" else 16)
            evaluate(cells[0])  # warm-up outside the timed region
            start = time.perf_counter()
            for cell in cells[:reps]:
                evaluate(cell)
            elapsed = time.perf_counter() - start
            rows.append((n, route, reps, elapsed / reps))
    text = bench_table(rows, skipped).render()
    _emit(text, args.out)
    figures = _figure_dir(args.figures)
    if figures is not None and rows:
        render_bench_times(rows, figures / "bench_times.png")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrecall",
        description="Teleportation-style channel simulator: outcome tables, "
        "memory states, invariant verification, sampling and benchmarks.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    jobs_default = _default_jobs()

    p = sub.add_parser("probs", help="outcome probability table (CSV)")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--out", help="write the CSV here instead of stdout")
    p.add_argument("--figures", help="directory for PNG figures")
    p.add_argument("--jobs", type=int, default=jobs_default,
                   help="worker threads for the per-outcome sweep")
    p.set_defaults(func=_cmd_probs)

    p = sub.add_parser("evolve", help="conditional memory state for one outcome")
    p.add_argument("scenario")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--route", choices=["direct", "factorized", "oracle"],
                   default="factorized")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("verify", help="run the named invariant suite")
    p.add_argument("scenario", nargs="?")
    p.add_argument("--random", nargs=3, type=int, metavar=("N", "COUNT", "SEED"),
                   help="verify COUNT random state pairs at dimension N")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sample", help="sample recognition events (CSV)")
    p.add_argument("scenario")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--figures")
    p.add_argument("--jobs", type=int, default=jobs_default)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("bench", help="time the evaluation routes (CSV)")
    p.add_argument("--n-list", required=True, help="comma-separated dimensions")
    p.add_argument("--route-list", default="factorized,oracle",
                   help="comma-separated routes")
    p.add_argument("--out")
    p.add_argument("--figures")
    p.add_argument("--jobs", type=int, default=jobs_default)
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        return _fail(2, "E_SCHEMA", exc)
    except DimensionTooLargeError as exc:
        return _fail(2, "E_DIMENSION", exc)
    except ValidationError as exc:
        return _fail(3, "E_STATE", exc)
    except OutcomeImpossibleError as exc:
        return _fail(4, "E_IMPOSSIBLE", f"{exc} (probability={exc.probability:.17g})")


if __name__ == "__main__":
    sys.exit(main())
