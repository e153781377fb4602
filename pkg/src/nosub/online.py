"""Online no-substitution k-means for arbitrary arrival order.

At each arrival the offline solver clusters the prefix seen so far; clusters
are ranked by the distance of their center to the new point, the closest ones
are merged while the merge cost stays within ``merge_budget`` times the
offline cost, and the point is taken as a center with probability
``min(1, sample_scale * k * ln k / s_t)`` where ``s_t`` is the merged mass.

Indices of points are 0-based; ``StepRecord.t`` and ``StepRecord.v_t`` are
1-based (time step and number of merged clusters).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidInputError, NosubError
from .metric import Dataset, as_point, as_points, leq, nearest_center_cost, sq_dists_to
from .offline import SolverSpec, solve

TRACE_COLUMNS = ("t", "offline_cost", "v_t", "s_t", "p_t", "selected", "r_t", "merged_cost")


@dataclass(frozen=True)
class OnlineConfig:
    k: int
    solver: SolverSpec = field(default_factory=SolverSpec)
    merge_budget: float = 100.0
    sample_scale: float = 20.0
    seed: int = 0
    record_trace: bool = True
    retain_clusterings: bool = False

    def __post_init__(self):
        if self.k < 2:
            raise InvalidInputError("online clustering needs k >= 2 (k ln k vanishes at k = 1)")
        if not (self.merge_budget > 0 and self.sample_scale > 0):
            raise InvalidInputError("merge_budget and sample_scale must be positive")

    @property
    def sampling_numerator(self) -> float:
        return self.sample_scale * self.k * math.log(self.k)

    def with_seed(self, seed: int) -> "OnlineConfig":
        return replace(self, seed=seed)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "solver": self.solver.to_dict(),
            "merge_budget": self.merge_budget,
            "sample_scale": self.sample_scale,
            "seed": self.seed,
            "record_trace": self.record_trace,
            "retain_clusterings": self.retain_clusterings,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "OnlineConfig":
        return cls(
            k=int(d["k"]),
            solver=SolverSpec.from_dict(d["solver"]) if "solver" in d else SolverSpec(),
            merge_budget=float(d.get("merge_budget", 100.0)),
            sample_scale=float(d.get("sample_scale", 20.0)),
            seed=int(d.get("seed", 0)),
            record_trace=bool(d.get("record_trace", True)),
            retain_clusterings=bool(d.get("retain_clusterings", False)),
        )


@dataclass
class StepRecord:
    t: int
    offline_cost: float
    v_t: int
    s_t: int
    p_t: float
    selected: bool
    r_t: float
    merged_cost: float
    ell: int
    # per-prefix-point rank of its cluster (0 = closest to x_t) and ranked centers
    ranked_assignment: np.ndarray | None = None
    ranked_centers: np.ndarray | None = None

    def row(self) -> dict:
        return {c: getattr(self, c) for c in TRACE_COLUMNS}

    def to_dict(self) -> dict:
        d = self.row()
        d["r_t"] = None if math.isinf(self.r_t) else self.r_t
        d["ell"] = self.ell
        return d


@dataclass
class OnlineRun:
    centers: list[int]
    trace: list[StepRecord]
    final_cost: float
    expected_centers: float
    config: OnlineConfig

    @property
    def n_centers(self) -> int:
        return len(self.centers)

    def to_dict(self, include_trace: bool | None = None) -> dict:
        include = self.config.record_trace if include_trace is None else include_trace
        d = {
            "centers": list(self.centers),
            "n_centers": self.n_centers,
            "final_cost": self.final_cost,
            "expected_centers": self.expected_centers,
            "config": self.config.to_dict(),
        }
        if include:
            d["trace"] = [r.to_dict() for r in self.trace]
        return d

    def to_json(self, include_trace: bool | None = None) -> str:
        return json.dumps(self.to_dict(include_trace), indent=2, sort_keys=True)

    def trace_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for r in self.trace:
            row = r.row()
            w.writerow([repr(row[c]) if isinstance(row[c], float) else int(row[c]) for c in TRACE_COLUMNS])
        return buf.getvalue()


def sampling_probability(s_t: int, k: int, sample_scale: float = 20.0) -> float:
    return min(1.0, sample_scale * k * math.log(k) / s_t)


def merge_index(sizes, ranked_centers, offline_cost: float, merge_budget: float = 100.0) -> int:
    """Largest ``i`` (1-based) with sum_{j<=i} |C^j| d(c^j, c^i)^2 <= budget * cost.

    ``sizes`` and ``ranked_centers`` must already be ordered by center distance
    to the arriving point. The result is at least 1 since the sum vanishes at
    ``i = 1``.
    """
    sizes = np.asarray(sizes, dtype=np.float64)
    C = as_points(ranked_centers)
    diff = C[:, None, :] - C[None, :, :]
    D2 = np.einsum("ijk,ijk->ij", diff, diff)
    # sums[i] = sum_{j <= i} sizes[j] * D2[j, i]
    sums = np.diagonal(np.cumsum(sizes[:, None] * D2, axis=0))
    limit = merge_budget * offline_cost
    v = 1
    for i, s in enumerate(sums):
        if leq(float(s), limit):
            v = i + 1
    return v


def merged_cost(prefix, ranked_assignment, ranked_centers, v_t: int) -> float:
    """Cost when clusters ranked ``< v_t`` all share the center ranked ``v_t - 1``."""
    X = as_points(prefix)
    C = as_points(ranked_centers)
    label = np.asarray(ranked_assignment)
    target = np.where(label < v_t, v_t - 1, label)
    diff = X - C[target]
    return float(np.einsum("ij,ij->", diff, diff))


def plan_step(prefix: np.ndarray, config: OnlineConfig) -> StepRecord:
    """Everything about arrival ``t = len(prefix)`` except the coin flip."""
    X = as_points(prefix)
    t = len(X)
    x_t = X[-1]
    result = solve(X, config.k, config.solver)
    cl = result.clustering
    center_d2 = sq_dists_to(cl.centers, x_t)
    rank_order = np.argsort(center_d2, kind="stable")  # ties -> lower cluster index
    rank_of = np.empty_like(rank_order)
    rank_of[rank_order] = np.arange(len(rank_order))
    ranked_centers = cl.centers[rank_order]
    ranked_assignment = rank_of[cl.assignment]
    sizes = np.bincount(ranked_assignment, minlength=len(ranked_centers))
    v = merge_index(sizes, ranked_centers, cl.total_cost, config.merge_budget)
    s = int(sizes[:v].sum())
    ell = len(ranked_centers)
    r = math.sqrt(float(center_d2[rank_order[v]])) if v < ell else math.inf
    rec = StepRecord(
        t=t,
        offline_cost=cl.total_cost,
        v_t=v,
        s_t=s,
        p_t=sampling_probability(s, config.k, config.sample_scale),
        selected=False,
        r_t=r,
        merged_cost=merged_cost(X, ranked_assignment, ranked_centers, v),
        ell=ell,
    )
    if config.retain_clusterings:
        rec.ranked_assignment = ranked_assignment
        rec.ranked_centers = ranked_centers
    return rec


def plan_online(X, config: OnlineConfig) -> list[StepRecord]:
    """Per-step records for the whole stream, with ``selected`` left False.

    The plan depends on the solver but not on ``config.seed``; several seeded
    runs on the same data can share one plan via ``run_online(schedule=...)``.
    """
    pts = X.points if isinstance(X, Dataset) else as_points(X)
    return [plan_step(pts[: t + 1], config) for t in range(len(pts))]


class OnlineState:
    """Incremental form of the algorithm: feed points one at a time with :meth:`step`."""

    def __init__(self, config: OnlineConfig):
        self.config = config
        self.rng = np.random.default_rng(config.seed)
        self._points: list[np.ndarray] = []
        self.centers: list[int] = []
        self.trace: list[StepRecord] = []
        self.expected_centers = 0.0

    def step(self, x) -> tuple[bool, StepRecord]:
        x = as_point(x)
        self._points.append(x)
        rec = plan_step(np.vstack(self._points), self.config)
        rec.selected = bool(self.rng.random() < rec.p_t)
        if rec.selected:
            self.centers.append(len(self._points) - 1)
        self.expected_centers += rec.p_t
        if self.config.record_trace:
            self.trace.append(rec)
        return rec.selected, rec


def run_online(X, config: OnlineConfig, schedule: list[StepRecord] | None = None) -> OnlineRun:
    """Run the online algorithm over ``X`` in row order.

    ``final_cost`` assigns every point of ``X`` to its nearest selected center.
    Passing a precomputed ``schedule`` from :func:`plan_online` (same data and
    solver) skips the offline solves; the decisions are identical.
    """
    pts = X.points if isinstance(X, Dataset) else as_points(X)
    if schedule is None:
        schedule = plan_online(pts, config)
    if len(schedule) != len(pts):
        raise InvalidInputError("schedule length does not match the data")
    rng = np.random.default_rng(config.seed)
    centers: list[int] = []
    trace: list[StepRecord] = []
    expected = 0.0
    for i, planned in enumerate(schedule):
        selected = bool(rng.random() < planned.p_t)
        if selected:
            centers.append(i)
        expected += planned.p_t
        if config.record_trace:
            trace.append(replace(planned, selected=selected))
    if not centers:
        raise NosubError("no centers selected; the first arrival is always taken")
    return OnlineRun(centers, trace, nearest_center_cost(pts, pts[centers]), expected, config)
