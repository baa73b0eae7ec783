"""Scenario files: JSON descriptions of dimension, basis and input states.

Complex numbers are [re, im] pairs; all indices are 1-based.  Structural
problems raise SchemaError; inputs that parse but violate a mathematical
invariant (non-orthonormal basis, non-positive matrix, ...) raise the
matching ValidationError subclass.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .basis import OrthonormalBasis
from .channels import MultiplicationChannel, ShiftChannel, SplittingChannel
from .errors import SchemaError
from .groupspace import DEFAULT_TOL, AmplitudeVector
from .states import DensityOperator, TraceClassOperator

_TOP_LEVEL_KEYS = {"n", "basis", "rho", "gamma", "tolerance", "seed"}


@dataclass(frozen=True, eq=False)
class Scenario:
    n: int
    basis: OrthonormalBasis
    rho: DensityOperator
    gamma: DensityOperator
    tolerance: float = DEFAULT_TOL
    seed: int | None = None
    digest: str = ""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SchemaError(message)


def _parse_complex(value) -> complex:
    _require(
        isinstance(value, (list, tuple)) and len(value) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value),
        f"complex numbers are [re, im] pairs, got {value!r}",
    )
    return complex(value[0], value[1])


def _parse_vector(value, n: int) -> np.ndarray:
    _require(isinstance(value, list), f"vector must be a list, got {type(value).__name__}")
    _require(len(value) == n, f"vector has {len(value)} entries, expected {n}")
    return np.array([_parse_complex(x) for x in value], dtype=np.complex128)


def _parse_matrix(value, n: int) -> np.ndarray:
    _require(isinstance(value, list) and len(value) == n,
             f"matrix must be a list of {n} rows")
    return np.array([_parse_vector(row, n) for row in value], dtype=np.complex128)


def parse_basis(spec, n: int, tol: float = DEFAULT_TOL) -> OrthonormalBasis:
    """Basis spec: "delta" | "fourier" | {"custom": <matrix>}."""
    if spec == "delta":
        return OrthonormalBasis.delta(n)
    if spec == "fourier":
        return OrthonormalBasis.fourier(n)
    if isinstance(spec, dict) and set(spec) == {"custom"}:
        return OrthonormalBasis.custom(_parse_matrix(spec["custom"], n), tol=tol)
    raise SchemaError(f"unknown basis spec {spec!r}")


def parse_state(spec, n: int, tol: float = DEFAULT_TOL) -> DensityOperator:
    """State spec grammar:

    {"kind": "pure", "vector": [[re, im], ...]}
    {"kind": "mixed", "weights": [...], "vectors": [...]}
    {"kind": "matrix", "entries": [[[re, im], ...], ...]}
    {"kind": "kappa"} | {"kind": "maximally_mixed"} | {"kind": "delta", "k": int}
    """
    _require(isinstance(spec, dict), f"state spec must be an object, got {spec!r}")
    kind = spec.get("kind")
    if kind == "pure":
        _require(set(spec) == {"kind", "vector"}, "pure state takes only 'vector'")
        return DensityOperator.pure(_parse_vector(spec["vector"], n))
    if kind == "mixed":
        _require(set(spec) == {"kind", "weights", "vectors"},
                 "mixed state takes 'weights' and 'vectors'")
        weights = spec["weights"]
        vectors = spec["vectors"]
        _require(isinstance(weights, list) and isinstance(vectors, list)
                 and len(weights) == len(vectors) and len(weights) >= 1,
                 "mixed state needs matching nonempty weight and vector lists")
        _require(all(isinstance(w, (int, float)) and not isinstance(w, bool)
                     for w in weights), "weights must be numbers")
        vecs = np.array([_parse_vector(v, n) for v in vectors], dtype=np.complex128)
        return DensityOperator.mixture(weights, vecs, n=n, tol=tol)
    if kind == "matrix":
        _require(set(spec) == {"kind", "entries"}, "matrix state takes only 'entries'")
        return DensityOperator.from_matrix(_parse_matrix(spec["entries"], n), n=n, tol=tol)
    if kind == "kappa":
        _require(set(spec) == {"kind"}, "kappa state takes no parameters")
        return DensityOperator.flat_pure(n)
    if kind == "maximally_mixed":
        _require(set(spec) == {"kind"}, "maximally_mixed state takes no parameters")
        return DensityOperator.maximally_mixed(n)
    if kind == "delta":
        _require(set(spec) == {"kind", "k"}, "delta state takes only 'k'")
        k = spec["k"]
        _require(isinstance(k, int) and not isinstance(k, bool) and 1 <= k <= n,
                 f"delta index must be in 1..{n}, got {k!r}")
        return DensityOperator.delta_state(n, k)
    raise SchemaError(f"unknown state kind {kind!r}")


def parse_channel(spec, n: int, tol: float = DEFAULT_TOL):
    """Channel spec grammar:

    {"kind": "tau", "tau": <state-spec>}
    {"kind": "shift", "j": int}
    {"kind": "split", "h": [[re, im], ...]}
    """
    _require(isinstance(spec, dict), f"channel spec must be an object, got {spec!r}")
    kind = spec.get("kind")
    if kind == "tau":
        _require(set(spec) == {"kind", "tau"}, "tau channel takes only 'tau'")
        state = parse_state(spec["tau"], n, tol)
        tau = TraceClassOperator(
            state.weights.copy(), state.vectors.copy(), n=n, validate=False
        )
        return MultiplicationChannel(tau)
    if kind == "shift":
        _require(set(spec) == {"kind", "j"}, "shift channel takes only 'j'")
        j = spec["j"]
        _require(isinstance(j, int) and not isinstance(j, bool) and 1 <= j <= n,
                 f"shift index must be in 1..{n}, got {j!r}")
        return ShiftChannel(j)
    if kind == "split":
        _require(set(spec) == {"kind", "h"}, "split channel takes only 'h'")
        h = AmplitudeVector(_parse_vector(spec["h"], n), n, 1)
        return SplittingChannel(h)
    raise SchemaError(f"unknown channel kind {kind!r}")


def scenario_from_dict(doc, digest: str = "") -> Scenario:
    _require(isinstance(doc, dict), "scenario document must be a JSON object")
    unknown = set(doc) - _TOP_LEVEL_KEYS
    _require(not unknown, f"unknown scenario keys {sorted(unknown)}")
    for key in ("n", "basis", "rho", "gamma"):
        _require(key in doc, f"scenario is missing required key {key!r}")
    n = doc["n"]
    _require(isinstance(n, int) and not isinstance(n, bool) and n >= 1,
             f"n must be an integer >= 1, got {n!r}")
    tolerance = doc.get("tolerance", DEFAULT_TOL)
    _require(isinstance(tolerance, (int, float)) and not isinstance(tolerance, bool)
             and tolerance >= 0, f"tolerance must be a nonnegative number, got {tolerance!r}")
    seed = doc.get("seed")
    _require(seed is None or (isinstance(seed, int) and not isinstance(seed, bool)),
             f"seed must be an integer, got {seed!r}")
    basis = parse_basis(doc["basis"], n, float(tolerance))
    rho = parse_state(doc["rho"], n, float(tolerance))
    gamma = parse_state(doc["gamma"], n, float(tolerance))
    return Scenario(
        n=n, basis=basis, rho=rho, gamma=gamma,
        tolerance=float(tolerance), seed=seed, digest=digest,
    )


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise SchemaError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaError(f"scenario file {path} is not valid JSON: {exc}") from exc
    digest = hashlib.sha256(raw).hexdigest()[:12]
    return scenario_from_dict(doc, digest=digest)
