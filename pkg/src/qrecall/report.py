"""Result tables, deterministic CSV rendering and figure output.

CSV conventions: '.' decimal separator, 17 significant digits, '\\n' line
endings, metadata as leading '#' comment lines.  Figures are optional PNG
renderings written next to the delimited output; they never affect the
primary outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import NonFlatBasisError
from .states import fidelity
from .teleport import OutcomeDistribution, unitary_key


def fmt(value: float) -> str:
    """Render a float with 17 significant digits (round-trip exact)."""
    return format(float(value), ".17g")


@dataclass
class ResultTable:
    metadata: list[tuple[str, str]]
    header: list[str]
    rows: list[list[str]] = field(default_factory=list)
    trailer: list[tuple[str, str]] = field(default_factory=list)

    def render(self) -> str:
        lines = [f"# {key}={value}" for key, value in self.metadata]
        lines.append(",".join(self.header))
        lines.extend(",".join(row) for row in self.rows)
        lines.extend(f"# {key}={value}" for key, value in self.trailer)
        return "\n".join(lines) + "\n"


def base_metadata(command: str, scenario) -> list[tuple[str, str]]:
    return [
        ("command", command),
        ("version", __version__),
        ("scenario", scenario.digest or "inline"),
    ]


def probability_table(scenario, dist: OutcomeDistribution) -> ResultTable:
    """Outcome table: probability, possibility flag, state purity and the
    fidelity of the key-recovered state to the input (when a key exists)."""
    key_cache: dict[tuple[int, int], object] = {}

    def key_for(i: int, j: int):
        if (i, j) not in key_cache:
            try:
                key_cache[(i, j)] = unitary_key(
                    scenario.basis, i, j, scenario.gamma, tol=scenario.tolerance
                )
            except NonFlatBasisError:
                key_cache[(i, j)] = None
        return key_cache[(i, j)]

    table = ResultTable(
        metadata=base_metadata("probs", scenario) + [("route", dist.route)],
        header=["i", "j", "probability", "possible", "purity", "fidelity_to_rho"],
    )
    for outcome in dist.outcomes:
        state = dist.state(outcome.i, outcome.j)
        possible = "1" if dist.is_possible(outcome.i, outcome.j) else "0"
        purity = fmt(state.purity()) if state is not None else ""
        fid = ""
        if state is not None:
            key = key_for(outcome.i, outcome.j)
            if key is not None:
                recovered = _conjugate_state(state, key.matrix.conj().T)
                fid = fmt(fidelity(recovered, scenario.rho))
        table.rows.append(
            [str(outcome.i), str(outcome.j), fmt(outcome.probability),
             possible, purity, fid]
        )
    total = dist.total_probability()
    table.trailer.append(("total_probability", fmt(total)))
    return table


def _conjugate_state(state, matrix):
    from .states import DensityOperator

    out = matrix @ state.matrix @ matrix.conj().T
    return DensityOperator.from_matrix(out / np.trace(out).real, n=state.n)


def tally_events(events, n: int) -> np.ndarray:
    counts = np.zeros((n, n), dtype=np.int64)
    for outcome, _state in events:
        counts[outcome.i - 1, outcome.j - 1] += 1
    return counts


def sample_table(
    scenario, dist: OutcomeDistribution, events, seed: int,
    counts: np.ndarray | None = None,
) -> ResultTable:
    """Trial rows plus an empirical-frequency summary trailer."""
    n = dist.n
    if counts is None:
        counts = tally_events(events, n)
    table = ResultTable(
        metadata=base_metadata("sample", scenario)
        + [("seed", str(seed)), ("count", str(len(events)))],
        header=["trial", "i", "j"],
    )
    for trial, (outcome, _state) in enumerate(events, start=1):
        table.rows.append([str(trial), str(outcome.i), str(outcome.j)])
    total = max(len(events), 1)
    worst = 0.0
    for outcome in dist.outcomes:
        empirical = counts[outcome.i - 1, outcome.j - 1] / total
        deviation = abs(empirical - outcome.probability)
        worst = max(worst, deviation)
        table.trailer.append(
            (f"freq[{outcome.i},{outcome.j}]",
             f"count={counts[outcome.i - 1, outcome.j - 1]} "
             f"empirical={fmt(empirical)} exact={fmt(outcome.probability)}")
        )
    table.trailer.append(("max_abs_deviation", fmt(worst)))
    return table


def bench_table(rows, skipped) -> ResultTable:
    table = ResultTable(
        metadata=[("command", "bench"), ("version", __version__)],
        header=["n", "route", "outcomes_timed", "seconds_per_outcome"],
    )
    for n, route, timed, per_outcome in rows:
        table.rows.append([str(n), route, str(timed), fmt(per_outcome)])
    for n, route, reason in skipped:
        table.trailer.append((f"skipped[{n},{route}]", reason))
    return table


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_probability_heatmap(dist: OutcomeDistribution, path: str | Path) -> Path:
    plt = _pyplot()
    path = Path(path)
    grid = dist.probability_matrix()
    fig, ax = plt.subplots(figsize=(5.0, 4.2))
    image = ax.imshow(
        grid, origin="upper", cmap="viridis",
        extent=(0.5, dist.n + 0.5, dist.n + 0.5, 0.5),
    )
    fig.colorbar(image, ax=ax, label="probability")
    ax.set_xlabel("j")
    ax.set_ylabel("i")
    ax.set_title("outcome probabilities")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_sample_frequencies(
    dist: OutcomeDistribution, counts: np.ndarray, total: int, path: str | Path
) -> Path:
    plt = _pyplot()
    path = Path(path)
    exact = np.array([o.probability for o in dist.outcomes])
    empirical = counts.reshape(-1) / max(total, 1)
    fig, ax = plt.subplots(figsize=(5.0, 4.2))
    top = max(float(exact.max()), float(empirical.max()), 1e-12)
    ax.plot([0, top], [0, top], color="0.6", linewidth=1, zorder=1)
    ax.scatter(exact, empirical, s=18, zorder=2)
    ax.set_xlabel("exact probability")
    ax.set_ylabel("empirical frequency")
    ax.set_title(f"empirical vs exact over {total} trials")
    ax.grid(alpha=0.3)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_bench_times(rows, path: str | Path) -> Path:
    plt = _pyplot()
    path = Path(path)
    by_route: dict[str, list[tuple[int, float]]] = {}
    for n, route, _timed, per_outcome in rows:
        by_route.setdefault(route, []).append((n, per_outcome))
    fig, ax = plt.subplots(figsize=(5.0, 4.2))
    for route, points in sorted(by_route.items()):
        points.sort()
        ax.plot([p[0] for p in points], [p[1] for p in points],
                marker="o", label=route)
    ax.set_xlabel("n")
    ax.set_ylabel("seconds per outcome")
    ax.set_yscale("log")
    ax.set_title("evaluation cost per outcome")
    ax.grid(alpha=0.3, which="both")
    ax.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
