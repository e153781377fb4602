"""Offline k-clustering subroutines used by the online algorithm.

Three solver kinds are available: ``exact-enum`` (partition enumeration,
n <= 12), ``exact-1d-dp`` (1-D dynamic program) and ``kmeanspp-lloyd``
(k-means++ seeding refined by Lloyd iterations, best of several restarts).
Every solver returns clusters centered at their means.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidInputError, UnsupportedInstanceError
from .metric import (
    ENUM_MAX_N,
    Clustering,
    as_points,
    clustering_from_assignment,
    exact_kmeans,
    sq_dists_to,
)

SOLVER_KINDS = ("exact-enum", "exact-1d-dp", "kmeanspp-lloyd")
LLOYD_RTOL = 1e-12


def kmeanspp_alpha_bound(k: int) -> float:
    """Expected approximation factor 8 (ln k + 2) of k-means++ seeding."""
    return 8.0 * (math.log(k) + 2.0)


@dataclass(frozen=True)
class SolverSpec:
    kind: str = "exact-1d-dp"
    alpha_claim: float = 1.0
    lloyd_max_iters: int = 100
    restarts: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SOLVER_KINDS:
            raise InvalidInputError(f"unknown solver kind {self.kind!r}; expected one of {SOLVER_KINDS}")
        if self.kind.startswith("exact") and self.alpha_claim != 1.0:
            raise InvalidInputError("exact solvers have alpha_claim = 1")
        if self.alpha_claim < 1.0:
            raise InvalidInputError("alpha_claim must be >= 1")
        if self.lloyd_max_iters < 0 or self.restarts < 1:
            raise InvalidInputError("lloyd_max_iters must be >= 0 and restarts >= 1")

    @classmethod
    def kmeanspp(cls, k: int, restarts: int = 4, lloyd_max_iters: int = 100, seed: int = 0):
        return cls("kmeanspp-lloyd", kmeanspp_alpha_bound(k), lloyd_max_iters, restarts, seed)

    @property
    def exact(self) -> bool:
        return self.kind != "kmeanspp-lloyd"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "SolverSpec":
        fields = {"kind", "alpha_claim", "lloyd_max_iters", "restarts", "seed"}
        if set(d) != fields:
            raise InvalidInputError(f"solver spec needs exactly the keys {sorted(fields)}")
        return cls(
            kind=str(d["kind"]),
            alpha_claim=float(d["alpha_claim"]),
            lloyd_max_iters=int(d["lloyd_max_iters"]),
            restarts=int(d["restarts"]),
            seed=int(d["seed"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "SolverSpec":
        return cls.from_dict(json.loads(text))


@dataclass
class OfflineResult:
    clustering: Clustering
    elapsed: float
    exact: bool


def kmeanspp_seed(X, k: int, seed) -> np.ndarray:
    """k-means++ (D^2-weighted) seeding.

    The first center is uniform over ``X``; each later one is drawn with
    probability proportional to its squared distance to the nearest chosen
    center. When every point is already a center, draws fall back to uniform,
    so duplicate centers can appear.

    Returns
    -------
    ndarray of shape (k, d)
    """
    X = as_points(X)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n = len(X)
    idx = [int(rng.integers(n))]
    d2 = sq_dists_to(X, X[idx[0]])
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=d2 / total))
        else:
            nxt = int(rng.integers(n))
        idx.append(nxt)
        np.minimum(d2, sq_dists_to(X, X[nxt]), out=d2)
    return X[idx].copy()


def _assign(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    d2 = np.stack([sq_dists_to(X, c) for c in centers], axis=1)
    return np.argmin(d2, axis=1)  # ties -> lowest center index


def lloyd_refine(X, centers, max_iters: int) -> Clustering:
    """Lloyd iterations from ``centers``.

    One assignment and re-centering always happens; ``max_iters`` further rounds
    follow unless the cost improves by less than 1e-12 (relative). Empty
    clusters are dropped.
    """
    X = as_points(X)
    C = as_points(centers)
    if len(C) == 0:
        raise InvalidInputError("lloyd_refine needs at least one center")
    cl = clustering_from_assignment(X, _assign(X, C))
    for _ in range(max_iters):
        nxt = clustering_from_assignment(X, _assign(X, cl.centers))
        if nxt.total_cost >= cl.total_cost:
            break
        converged = cl.total_cost - nxt.total_cost < LLOYD_RTOL * cl.total_cost
        cl = nxt
        if converged:
            break
    return cl


def _kmeanspp_lloyd(X: np.ndarray, k: int, spec: SolverSpec) -> Clustering:
    seeds = np.random.SeedSequence(spec.seed).spawn(spec.restarts)
    best = None
    for s in seeds:
        rng = np.random.default_rng(s)
        cl = lloyd_refine(X, kmeanspp_seed(X, k, rng), spec.lloyd_max_iters)
        if best is None or cl.total_cost < best.total_cost:
            best = cl
    return best


def solve(X, k: int, spec: SolverSpec) -> OfflineResult:
    """Cluster ``X`` into at most ``k`` nonempty clusters centered at their means.

    Deterministic given the point order, ``k`` and ``spec.seed``.

    Raises
    ------
    UnsupportedInstanceError
        ``exact-enum`` with n > 12, or ``exact-1d-dp`` with d > 1.
    """
    X = as_points(X)
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    start = time.perf_counter()
    if spec.kind == "exact-enum":
        if len(X) > ENUM_MAX_N:
            raise UnsupportedInstanceError(f"exact-enum supports n <= {ENUM_MAX_N}, got {len(X)}")
        cl = exact_kmeans(X, k, "enum")
    elif spec.kind == "exact-1d-dp":
        if X.shape[1] != 1:
            raise UnsupportedInstanceError(f"exact-1d-dp needs 1-D points, got d={X.shape[1]}")
        cl = exact_kmeans(X, k, "dp")
    else:
        cl = _kmeanspp_lloyd(X, k, spec)
    return OfflineResult(cl, time.perf_counter() - start, spec.exact)
