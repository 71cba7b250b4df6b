"""Reference sets and the coverage inverted distance (CID) quality indicator.

CID scores how well a test set A covers a reference set Z of failing inputs:

    CID(A, Z) = (1 / |Z|) * (sum_z d_z**q) ** (1/q)

where d_z is the p-norm distance from reference point z to its nearest point
in A. Lower is better; zero means every reference point coincides with a test
point. With the default q = 1 this is the mean nearest distance. The 1/|Z|
factor sits outside the q-th root, exactly as in the defining formula.

Reference sets are the failing points among a space-filling sample of the
search domain, persisted as CSV plus a JSON provenance sidecar and cached by
their construction key.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from .core import RunHistory, SearchSpace
from .problems import SyntheticProblem
from .samplers import grid_step_diagonal, sample_by_name


class EmptyReferenceSetError(RuntimeError):
    """No sampled point failed, so the reference set (and CID) is undefined."""

    def __init__(self, problem_name: str, oracle_label: str, total_sampled: int):
        self.total_sampled = total_sampled
        super().__init__(
            f"no failures among {total_sampled} sampled points for "
            f"{problem_name} ({oracle_label}); CID is undefined"
        )


@dataclass(frozen=True)
class CidParams:
    """Distance norm order ``p`` and aggregation order ``q``."""

    p: float = 2.0
    q: float = 1.0

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError(f"distance norm order must be >= 1, got {self.p}")
        if self.q < 1:
            raise ValueError(f"aggregation order must be >= 1, got {self.q}")


@dataclass(frozen=True)
class ReferenceSet:
    """Failing sample points approximating the failure region, with provenance."""

    points: np.ndarray
    problem_name: str
    oracle_label: str
    sampler_label: str
    sampler_params: dict
    total_sampled: int
    #: Maximal distance between adjacent reference points (R*). For grids this
    #: is the cell diagonal; otherwise the largest nearest-neighbor distance.
    max_adjacent_distance: float

    def __len__(self) -> int:
        return len(self.points)

    def content_hash(self) -> str:
        return hashlib.sha256(_points_csv_bytes(self.points)).hexdigest()


def _as_points(value, name: str) -> np.ndarray:
    if isinstance(value, ReferenceSet):
        value = value.points
    pts = np.asarray(value, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :] if pts.size else pts.reshape(0, 0)
    if pts.ndim != 2:
        raise ValueError(f"{name} must be a list of points")
    return pts


def _aggregate(distances: np.ndarray, q: float, m: int) -> float:
    return float(np.sum(distances**q) ** (1.0 / q) / m)


def cid(
    test_set,
    reference,
    params: CidParams = CidParams(),
    normalize_space: SearchSpace | None = None,
) -> float:
    """Coverage inverted distance of ``test_set`` against ``reference``.

    ``normalize_space``, when given, rescales both sets per axis to the unit
    box before measuring distances (off by default: distances are taken in
    raw search-space coordinates).
    """
    A = _as_points(test_set, "test set")
    Z = _as_points(reference, "reference set")
    if len(A) == 0:
        raise ValueError("test set is empty; CID needs at least one test point")
    if len(Z) == 0:
        raise ValueError("reference set is empty; CID needs at least one reference point")
    if A.shape[1] != Z.shape[1]:
        raise ValueError(
            f"dimensionality mismatch: test points are {A.shape[1]}-D, "
            f"reference points are {Z.shape[1]}-D"
        )
    if normalize_space is not None:
        A = (A - normalize_space.lows) / normalize_space.widths
        Z = (Z - normalize_space.lows) / normalize_space.widths
    nearest, _ = cKDTree(A).query(Z, p=params.p)
    return _aggregate(np.atleast_1d(nearest), params.q, len(Z))


@dataclass(frozen=True)
class ConvergenceCheckpoint:
    evaluations_used: int
    cid: float | None  # None while no failure has been found
    failures_so_far: int


@dataclass(frozen=True)
class ConvergenceSeries:
    checkpoints: tuple[ConvergenceCheckpoint, ...]

    def final(self) -> ConvergenceCheckpoint:
        return self.checkpoints[-1]


def convergence_series(
    history: RunHistory,
    reference,
    params: CidParams = CidParams(),
    interval: int = 100,
) -> ConvergenceSeries:
    """CID of all failures found so far, sampled every ``interval`` evaluations.

    Checkpoints sit at each multiple of the interval and at the final
    evaluation; the CID entry is None until the first failure appears.
    """
    if interval < 1:
        raise ValueError(f"checkpoint interval must be positive, got {interval}")
    Z = _as_points(reference, "reference set")
    if len(Z) == 0:
        raise ValueError("reference set is empty; CID needs at least one reference point")
    n = len(history.evaluations)
    marks = list(range(interval, n + 1, interval))
    if not marks or marks[-1] != n:
        marks.append(n)

    best = np.full(len(Z), np.inf)
    failures = 0
    cursor = 0
    checkpoints = []
    for mark in marks:
        fresh = [ev.input for ev in history.evaluations[cursor:mark] if ev.failed]
        cursor = mark
        if fresh:
            failures += len(fresh)
            d = cdist(Z, np.array(fresh), metric="minkowski", p=params.p).min(axis=1)
            best = np.minimum(best, d)
        value = _aggregate(best, params.q, len(Z)) if failures else None
        checkpoints.append(
            ConvergenceCheckpoint(evaluations_used=mark, cid=value, failures_so_far=failures)
        )
    return ConvergenceSeries(checkpoints=tuple(checkpoints))


def failure_count(history: RunHistory) -> int:
    """Number of failing evaluations in the run."""
    return sum(1 for ev in history.evaluations if ev.failed)


def first_failure_iteration(history: RunHistory, batch_size: int) -> int | None:
    """1-based generation of the earliest failure, batching by ``batch_size``."""
    if batch_size < 1:
        raise ValueError(f"batch size must be positive, got {batch_size}")
    for ev in history.evaluations:
        if ev.failed:
            return ev.index // batch_size + 1
    return None


# --- reference-set construction and persistence ------------------------------


def _dedupe_preserving_order(points: np.ndarray) -> np.ndarray:
    _, first_idx = np.unique(points, axis=0, return_index=True)
    return points[np.sort(first_idx)]


def max_nearest_neighbor_distance(points: np.ndarray) -> float:
    """Largest nearest-neighbor distance; 0 for fewer than two points."""
    if len(points) < 2:
        return 0.0
    d, _ = cKDTree(points).query(points, k=2)
    return float(np.max(d[:, 1]))


def build_reference_set(
    synthetic: SyntheticProblem,
    sampler: dict,
    cache_dir: str | Path | None = None,
) -> ReferenceSet:
    """Sample the search space, keep the failing points, record provenance.

    ``sampler`` is a config-shaped spec: {"strategy": ..., "params": {...}}.
    With ``cache_dir`` set, the result is persisted as CSV + JSON sidecar and
    later calls with the same construction key are served from disk untouched.
    """
    strategy = sampler.get("strategy")
    params = dict(sampler.get("params", {}))
    problem = synthetic.problem

    if cache_dir is not None:
        cache_dir = Path(cache_dir)
        key = _cache_key(problem.name, problem.oracle.variant_label, strategy, params)
        csv_path = cache_dir / f"refset-{key}.csv"
        if csv_path.exists():
            return load_reference_set(csv_path)

    batch = sample_by_name(problem.space, strategy, params)
    fitness = synthetic.fitness_batch(batch.points)
    failing = np.ones(len(batch.points), dtype=bool)
    for i, threshold in problem.oracle.clauses:
        failing &= fitness[:, i] < threshold
    points = _dedupe_preserving_order(batch.points[failing])
    if len(points) == 0:
        raise EmptyReferenceSetError(
            problem.name, problem.oracle.variant_label, len(batch.points)
        )

    if strategy == "grid":
        r_star = grid_step_diagonal(problem.space, params["k"])
    else:
        r_star = max_nearest_neighbor_distance(points)

    refset = ReferenceSet(
        points=points,
        problem_name=problem.name,
        oracle_label=problem.oracle.variant_label,
        sampler_label=strategy,
        sampler_params=params,
        total_sampled=len(batch.points),
        max_adjacent_distance=r_star,
    )
    if cache_dir is not None:
        save_reference_set(refset, csv_path)
    return refset


def _cache_key(problem: str, variant: str, strategy: str, params: dict) -> str:
    spec = {"problem": problem, "variant": variant, "strategy": strategy, "params": params}
    blob = json.dumps(spec, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _points_csv_bytes(points: np.ndarray) -> bytes:
    lines = [",".join(f"x{j + 1}" for j in range(points.shape[1]))]
    lines.extend(",".join(repr(float(v)) for v in row) for row in points)
    return ("\n".join(lines) + "\n").encode()


def save_reference_set(refset: ReferenceSet, csv_path: str | Path) -> Path:
    """Write the points CSV (header x1..xn) and the JSON provenance sidecar."""
    csv_path = Path(csv_path)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    payload = _points_csv_bytes(refset.points)
    csv_path.write_bytes(payload)
    sidecar = {
        "problem": refset.problem_name,
        "variant": refset.oracle_label,
        "sampler": refset.sampler_label,
        "params": refset.sampler_params,
        "total_sampled": refset.total_sampled,
        "max_adjacent_distance": refset.max_adjacent_distance,
        "content_hash": hashlib.sha256(payload).hexdigest(),
    }
    csv_path.with_suffix(".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return csv_path


def load_reference_set(csv_path: str | Path) -> ReferenceSet:
    """Read a persisted reference set; the sidecar is optional but preferred."""
    csv_path = Path(csv_path)
    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or not rows[0] or not rows[0][0].startswith("x"):
        raise ValueError(f"{csv_path}: expected a header row x1,...,xn")
    points = np.array([[float(v) for v in row] for row in rows[1:]])
    sidecar_path = csv_path.with_suffix(".json")
    if sidecar_path.exists():
        meta = json.loads(sidecar_path.read_text())
        return ReferenceSet(
            points=points,
            problem_name=meta.get("problem", "unknown"),
            oracle_label=meta.get("variant", "unknown"),
            sampler_label=meta.get("sampler", "unknown"),
            sampler_params=meta.get("params", {}),
            total_sampled=int(meta.get("total_sampled", len(points))),
            max_adjacent_distance=float(
                meta.get("max_adjacent_distance", max_nearest_neighbor_distance(points))
            ),
        )
    return ReferenceSet(
        points=points,
        problem_name="unknown",
        oracle_label="unknown",
        sampler_label="unknown",
        sampler_params={},
        total_sampled=len(points),
        max_adjacent_distance=max_nearest_neighbor_distance(points),
    )
