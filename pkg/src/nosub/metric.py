"""Geometric primitives: distances, k-means costs, diameters and aspect ratios.

Point sets are ``(n, d)`` float arrays; a 1-D array is read as ``n`` points on
the real line. All distances go through :func:`squared_dist` /
:func:`pairwise_dist`, which are Euclidean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, UndefinedRatioError, UnsupportedInstanceError

RTOL = 1e-9

ENUM_MAX_N = 12
DP_MAX_N = 5000
DIAM_ENUM_MAX_N = 15


# --------------------------------------------------------------------------
# tolerance-snapped comparisons


def leq(a: float, b: float, rtol: float = RTOL) -> bool:
    """``a <= b`` where values within ``rtol`` (relative) count as equal."""
    return a <= b or math.isclose(a, b, rel_tol=rtol, abs_tol=0.0)


def strictly_greater(a: float, b: float, rtol: float = RTOL) -> bool:
    """``a > b`` where values within ``rtol`` (relative) count as equal, hence False."""
    return a > b and not math.isclose(a, b, rel_tol=rtol, abs_tol=0.0)


# --------------------------------------------------------------------------
# containers


def as_points(X) -> np.ndarray:
    """Coerce ``X`` to a finite ``(n, d)`` float64 array."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise InvalidInputError(f"expected a 2-D point array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("point coordinates must be finite")
    return arr


def as_point(p) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(p, dtype=np.float64))
    if arr.ndim != 1:
        raise InvalidInputError(f"expected a single point, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("point coordinates must be finite")
    return arr


@dataclass
class Dataset:
    """Ordered points (row order is arrival order) with optional ground-truth labels."""

    points: np.ndarray
    labels: np.ndarray | None = None
    seed: int | None = None

    def __post_init__(self):
        self.points = as_points(self.points)
        if len(self.points) == 0:
            raise InvalidInputError("a dataset needs at least one point")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if self.labels.shape != (len(self.points),):
                raise InvalidInputError("labels must have one entry per point")

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return len(self.points)

    def subset(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=np.int64)
        labels = None if self.labels is None else self.labels[idx]
        return Dataset(self.points[idx], labels, self.seed)


@dataclass
class Clustering:
    """A partition of a point set with one center and cost per cluster."""

    assignment: np.ndarray
    centers: np.ndarray
    per_cluster_cost: np.ndarray
    total_cost: float

    @property
    def n_clusters(self) -> int:
        return len(self.centers)

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == c)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.n_clusters)


@dataclass
class DiameterPartition:
    assignment: np.ndarray
    value: float
    exact: bool
    n_groups: int = field(default=0)


# --------------------------------------------------------------------------
# distances and single-center costs


def squared_dist(a, b) -> float:
    """Squared Euclidean distance between two points of equal dimension."""
    a, b = as_point(a), as_point(b)
    if a.shape != b.shape:
        raise InvalidInputError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    diff = a - b
    return float(diff @ diff)


def dist(a, b) -> float:
    return math.sqrt(squared_dist(a, b))


def pairwise_dist(X) -> np.ndarray:
    """Full ``(n, n)`` Euclidean distance matrix."""
    X = as_points(X)
    diff = X[:, None, :] - X[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def sq_dists_to(X: np.ndarray, c: np.ndarray) -> np.ndarray:
    diff = X - c
    return np.einsum("ij,ij->i", diff, diff)


def cost_with_center(X, c) -> float:
    """Sum of squared distances from every point of ``X`` to the single center ``c``."""
    X = as_points(X)
    if len(X) == 0:
        raise InvalidInputError("cost of an empty set is undefined")
    c = as_point(c)
    if c.shape[0] != X.shape[1]:
        raise InvalidInputError(f"dimension mismatch: {X.shape[1]} vs {c.shape[0]}")
    return float(sq_dists_to(X, c).sum())


def mean(X) -> np.ndarray:
    X = as_points(X)
    if len(X) == 0:
        raise InvalidInputError("mean of an empty set is undefined")
    return X.mean(axis=0)


def one_means_cost(X) -> float:
    """Cost of ``X`` about its own mean, i.e. the optimal 1-means cost."""
    X = as_points(X)
    return cost_with_center(X, X.mean(axis=0))


def nearest_center_cost(X, centers) -> float:
    """Cost of assigning every point of ``X`` to its nearest center."""
    X = as_points(X)
    C = as_points(centers)
    best = np.full(len(X), np.inf)
    for c in C:
        np.minimum(best, sq_dists_to(X, c), out=best)
    return float(best.sum())


def canonical_labels(assignment) -> np.ndarray:
    """Relabel clusters by order of first appearance (0, 1, 2, ...)."""
    a = np.asarray(assignment, dtype=np.int64)
    _, first = np.unique(a, return_index=True)
    order = np.argsort(first, kind="stable")
    remap = np.empty(a.max() + 1, dtype=np.int64)
    remap[np.unique(a)[order]] = np.arange(len(order))
    return remap[a]


def clustering_from_assignment(X, assignment) -> Clustering:
    """Build a :class:`Clustering` centered at cluster means.

    Labels are canonicalised by first appearance so two solvers that find the
    same partition produce bit-identical costs.
    """
    X = as_points(X)
    a = canonical_labels(assignment)
    n_clusters = int(a.max()) + 1
    centers = np.empty((n_clusters, X.shape[1]))
    costs = np.empty(n_clusters)
    for c in range(n_clusters):
        pts = X[a == c]
        mu = pts.mean(axis=0)
        centers[c] = mu
        costs[c] = float(sq_dists_to(pts, mu).sum())
    total = 0.0
    for v in costs:
        total += float(v)
    return Clustering(a, centers, costs, total)


def n_distinct(X) -> int:
    return len(np.unique(as_points(X), axis=0))


def dedupe(X) -> np.ndarray:
    """Distinct rows of ``X`` in order of first occurrence."""
    X = as_points(X)
    _, first = np.unique(X, axis=0, return_index=True)
    return X[np.sort(first)]


def _duplicate_groups(X: np.ndarray) -> np.ndarray:
    _, first, inverse = np.unique(X, axis=0, return_index=True, return_inverse=True)
    return canonical_labels(first[inverse.ravel()])


# --------------------------------------------------------------------------
# exact k-means


def partition_labels(n: int, k: int) -> np.ndarray:
    """All partitions of ``n`` items into at most ``k`` blocks.

    Returned as restricted-growth strings, one row per partition, in
    lexicographic order.
    """
    k = max(1, min(k, n))
    labels = np.zeros((1, 1), dtype=np.int8)
    maxes = np.zeros(1, dtype=np.int8)
    for _ in range(1, n):
        n_child = np.minimum(maxes + 1, k - 1).astype(np.int64) + 1
        rows = np.repeat(labels, n_child, axis=0)
        prev_max = np.repeat(maxes, n_child)
        offsets = np.repeat(np.cumsum(n_child) - n_child, n_child)
        new = (np.arange(int(n_child.sum())) - offsets).astype(np.int8)
        labels = np.column_stack([rows, new])
        maxes = np.maximum(prev_max, new)
    return labels


def _enum_kmeans(X: np.ndarray, k: int) -> Clustering:
    n = len(X)
    if n > ENUM_MAX_N:
        raise UnsupportedInstanceError(f"exact enumeration supports n <= {ENUM_MAX_N}, got {n}")
    labels = partition_labels(n, k)
    Xc = X - X.mean(axis=0)
    sq = np.einsum("ij,ij->i", Xc, Xc)
    cost = np.zeros(len(labels))
    for b in range(min(k, n)):
        M = (labels == b).astype(np.float64)
        cnt = M.sum(axis=1)
        S = M @ Xc
        Q = M @ sq
        with np.errstate(invalid="ignore", divide="ignore"):
            part = Q - np.einsum("ij,ij->i", S, S) / np.maximum(cnt, 1.0)
        cost += np.where(cnt > 0, np.maximum(part, 0.0), 0.0)
    best = cost.min()
    slack = RTOL * max(best, 0.0) + 1e-12 * float(sq.sum())
    candidates = np.flatnonzero(cost <= best + slack)[:256]
    chosen, chosen_cost = None, np.inf
    for i in candidates:
        cl = clustering_from_assignment(X, labels[i])
        if cl.total_cost < chosen_cost:
            chosen, chosen_cost = cl, cl.total_cost
    return chosen


def _dp_kmeans_1d(X: np.ndarray, k: int) -> Clustering:
    """Optimal 1-D k-means by dynamic programming over sorted values."""
    values = X[:, 0]
    n = len(values)
    order = np.argsort(values, kind="stable")
    raw = values[order]
    v = raw - raw.mean()
    P1 = np.concatenate([[0.0], np.cumsum(v)])
    P2 = np.concatenate([[0.0], np.cumsum(v * v)])
    eps = np.finfo(float).eps

    def seg(a, b):
        a, b = np.broadcast_arrays(a, b)
        cnt = b - a + 1
        s = P1[b + 1] - P1[a]
        q = P2[b + 1] - P2[a]
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.maximum(q - s * s / cnt, 0.0)
        # prefix sums cancel badly on tight segments; recompute those directly
        loose = out <= 8 * n * eps * P2[b + 1]
        out = np.where(loose & (raw[a] == raw[b]), 0.0, out)
        for f in np.flatnonzero(loose & (raw[a] != raw[b])):
            w = raw[a.flat[f] : b.flat[f] + 1]
            out.flat[f] = np.sum((w - w.mean()) ** 2)
        return out

    kk = min(k, n)
    idx = np.arange(n)
    D = seg(np.zeros(n, dtype=np.int64), idx)
    starts = [np.zeros(n, dtype=np.int64)]
    block = max(1, 4_000_000 // max(n, 1))
    m = np.arange(1, n)[:, None]
    # cost of segment m..i for every (m, i) pair, inf where m > i; cached when it fits
    full = None
    if kk > 1 and block >= n:
        cols = idx[None, :]
        full = np.where(m <= cols, seg(np.minimum(m, cols), cols), np.inf)
    for _ in range(1, kk):
        newD = D.copy()
        start = np.full(n, -1, dtype=np.int64)
        for lo in range(1, n, block):
            cols = np.arange(lo, min(n, lo + block))
            if full is not None:
                seg_block = full[:, cols]
            else:
                seg_block = np.where(
                    m <= cols[None, :], seg(np.minimum(m, cols[None, :]), cols[None, :]), np.inf
                )
            vals = D[m - 1] + seg_block
            arg = np.argmin(vals, axis=0)
            best = vals[arg, np.arange(len(cols))]
            better = best < D[cols]
            newD[cols] = np.where(better, best, D[cols])
            start[cols] = np.where(better, arg + 1, -1)
        D = newD
        starts.append(start)

    sorted_labels = np.empty(n, dtype=np.int64)
    i, j, g = n - 1, kk - 1, 0
    while i >= 0:
        m = int(starts[j][i]) if j > 0 else 0
        if m == -1:
            j -= 1
            continue
        sorted_labels[m : i + 1] = g
        g += 1
        i, j = m - 1, j - 1
    assignment = np.empty(n, dtype=np.int64)
    assignment[order] = sorted_labels
    return clustering_from_assignment(X, assignment)


def exact_kmeans(X, k: int, method: str = "auto") -> Clustering:
    """Optimal k-means clustering by enumeration (n <= 12) or 1-D DP.

    ``method`` is one of ``"auto"``, ``"enum"`` or ``"dp"``.
    """
    X = as_points(X)
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    if method == "auto":
        method = "dp" if X.shape[1] == 1 else "enum"
    if method == "dp":
        if X.shape[1] != 1:
            raise UnsupportedInstanceError("1-D dynamic program needs 1-dimensional points")
        return _dp_kmeans_1d(X, k)
    if method == "enum":
        if len(X) > ENUM_MAX_N:
            raise UnsupportedInstanceError(
                f"exact enumeration supports n <= {ENUM_MAX_N}, got {len(X)}"
            )
        if k >= n_distinct(X):
            return clustering_from_assignment(X, _duplicate_groups(X))
        return _enum_kmeans(X, k)
    raise InvalidInputError(f"unknown exact method {method!r}")


def opt_kmeans_cost_oracle(X, k: int) -> float:
    """Exact optimal k-means cost ``L_k(X)``.

    Dispatches to the 1-D dynamic program for 1-D inputs with ``n <= 5000`` and to
    partition enumeration for ``n <= 12`` in any dimension.

    Raises
    ------
    UnsupportedInstanceError
        If the instance fits neither exact regime.
    """
    X = as_points(X)
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    if k >= n_distinct(X):
        return 0.0
    n, d = X.shape
    if d == 1 and n <= DP_MAX_N:
        return _dp_kmeans_1d(X, k).total_cost
    if n <= ENUM_MAX_N:
        return _enum_kmeans(X, k).total_cost
    raise UnsupportedInstanceError(
        f"no exact k-means regime for n={n}, d={d}; use an approximate solver"
    )


# --------------------------------------------------------------------------
# min-max-diameter partitions


def _f2i(x: float) -> int:
    return int(np.float64(x).view(np.int64))


def _i2f(i: int) -> float:
    return float(np.int64(i).view(np.float64))


def _cover_1d(v: np.ndarray, D: float, limit: int) -> list[int] | None:
    """Greedy left-to-right cover of sorted ``v`` by groups of spread <= D."""
    starts = []
    i, n = 0, len(v)
    while i < n:
        if len(starts) == limit:
            return None
        starts.append(i)
        i += int(np.searchsorted(v[i:] - v[i], D, side="right"))
    return starts


def _mmd_1d(values: np.ndarray, ell: int) -> tuple[np.ndarray, float]:
    order = np.argsort(values, kind="stable")
    v = values[order]
    if ell == 2 and len(v) >= 2:
        # best single split point of the sorted values
        spread = np.maximum(v[:-1] - v[0], v[-1] - v[1:])
        cut = int(np.argmin(spread)) + 1
        sorted_labels = (np.arange(len(v)) >= cut).astype(np.int64)
        assignment = np.empty(len(v), dtype=np.int64)
        assignment[order] = sorted_labels
        return canonical_labels(assignment), float(spread[cut - 1])
    hi = _f2i(v[-1] - v[0])
    lo = -1  # bit pattern below 0.0; infeasible sentinel
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _cover_1d(v, _i2f(mid), ell) is not None:
            hi = mid
        else:
            lo = mid
    starts = _cover_1d(v, _i2f(hi), ell)
    ends = starts[1:] + [len(v)]
    sorted_labels = np.empty(len(v), dtype=np.int64)
    value = 0.0
    for g, (a, b) in enumerate(zip(starts, ends)):
        sorted_labels[a:b] = g
        value = max(value, float(v[b - 1] - v[a]))
    assignment = np.empty(len(v), dtype=np.int64)
    assignment[order] = sorted_labels
    return canonical_labels(assignment), value


def _two_color(conflict: np.ndarray) -> np.ndarray | None:
    n = len(conflict)
    color = np.full(n, -1, dtype=np.int64)
    for s in range(n):
        if color[s] >= 0:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            nb = np.flatnonzero(conflict[u])
            if np.any(color[nb] == color[u]):
                return None
            fresh = nb[color[nb] < 0]
            color[fresh] = 1 - color[u]
            stack.extend(fresh.tolist())
    return color


def _mmd_two(D: np.ndarray) -> tuple[np.ndarray, float]:
    """Exact min-max-diameter 2-partition.

    Pairs are added in decreasing distance to a parity union-find; the first
    pair that closes an odd cycle has the optimal diameter, and the parities
    just before it give the partition.
    """
    n = len(D)
    iu, ju = np.triu_indices(n, 1)
    w = D[iu, ju]
    order = np.argsort(-w, kind="stable")
    parent = list(range(n))
    parity = [0] * n  # parity relative to parent

    def find(x):
        p = 0
        root = x
        while parent[root] != root:
            p ^= parity[root]
            root = parent[root]
        # path compression
        q = p
        while parent[x] != root:
            nxt, px = parent[x], parity[x]
            parent[x], parity[x] = root, q
            q ^= px
            x = nxt
        return root, p

    for e in order:
        if w[e] <= 0:
            break
        a, b = int(iu[e]), int(ju[e])
        ra, pa = find(a)
        rb, pb = find(b)
        if ra == rb:
            if pa == pb:
                break
            continue
        parent[ra] = rb
        parity[ra] = pa ^ pb ^ 1
    color = np.array([find(i)[1] for i in range(n)], dtype=np.int64)
    labels = canonical_labels(color)
    return labels, _partition_diameter_from_matrix(D, labels)


def _k_color(conflict: np.ndarray, ell: int) -> np.ndarray | None:
    n = len(conflict)
    order = np.argsort(-conflict.sum(axis=1), kind="stable")
    nbrs = [np.flatnonzero(conflict[u]) for u in range(n)]
    color = np.full(n, -1, dtype=np.int64)

    def place(pos: int, used: int) -> bool:
        if pos == n:
            return True
        u = order[pos]
        taken = set(color[nbrs[u]].tolist())
        for c in range(min(used + 1, ell)):
            if c not in taken:
                color[u] = c
                if place(pos + 1, max(used, c + 1)):
                    return True
        color[u] = -1
        return False

    return color if place(0, 0) else None


def _mmd_matrix(D: np.ndarray, ell: int) -> tuple[np.ndarray, float]:
    """Exact min-max-diameter ``ell``-partition from a distance matrix.

    Binary search over pairwise distances; a threshold is feasible when the
    graph of pairs farther apart than it is ``ell``-colourable.
    """
    n = len(D)
    if ell >= n:
        return np.arange(n), 0.0
    if ell == 1:
        return np.zeros(n, dtype=np.int64), float(D.max())
    if ell == 2:
        return _mmd_two(D)
    cand = np.unique(D[np.triu_indices(n, 1)])
    cand = cand[cand > 0]
    color_fn = _two_color if ell == 2 else (lambda g: _k_color(g, ell))
    coloring = color_fn(D > 0.0)
    if coloring is not None:
        return canonical_labels(coloring), 0.0
    # cand[-1] is always feasible: nothing is farther apart than the diameter
    lo, hi = -1, len(cand) - 1
    best = color_fn(D > cand[hi])
    while hi - lo > 1:
        mid = (lo + hi) // 2
        coloring = color_fn(D > cand[mid])
        if coloring is not None:
            hi, best = mid, coloring
        else:
            lo = mid
    best = canonical_labels(best)
    return best, _partition_diameter_from_matrix(D, best)


def _partition_diameter_from_matrix(D: np.ndarray, assignment: np.ndarray) -> float:
    value = 0.0
    for c in np.unique(assignment):
        idx = np.flatnonzero(assignment == c)
        if len(idx) > 1:
            value = max(value, float(D[np.ix_(idx, idx)].max()))
    return value


def partition_diameter(X, assignment) -> float:
    """Largest intra-cluster diameter of a partition."""
    X = as_points(X)
    assignment = np.asarray(assignment)
    value = 0.0
    for c in np.unique(assignment):
        pts = X[assignment == c]
        if len(pts) < 2:
            continue
        if X.shape[1] == 1:
            value = max(value, float(pts.max() - pts.min()))
        else:
            value = max(value, float(pairwise_dist(pts).max()))
    return value


def farthest_first_partition(X, ell: int) -> np.ndarray:
    """Gonzalez farthest-first traversal from point 0; nearest-center assignment."""
    X = as_points(X)
    centers = [0]
    mind = sq_dists_to(X, X[0])
    for _ in range(ell - 1):
        nxt = int(np.argmax(mind))
        if mind[nxt] == 0.0:
            break
        centers.append(nxt)
        np.minimum(mind, sq_dists_to(X, X[nxt]), out=mind)
    d2 = np.stack([sq_dists_to(X, X[c]) for c in centers], axis=1)
    return canonical_labels(np.argmin(d2, axis=1))


def exact_diameter_feasible(n: int, dim: int, ell: int) -> bool:
    return dim == 1 or n <= DIAM_ENUM_MAX_N or ell <= 2


def min_max_diameter_partition(X, ell: int, mode: str = "exact") -> DiameterPartition:
    """Partition ``X`` into at most ``ell`` groups minimising the largest diameter.

    ``mode="exact"`` returns ``diam_ell(X)``: sorted-threshold search in 1-D, and
    threshold search with a colourability test otherwise (n <= 15, or any n when
    ``ell <= 2``). ``mode="approx"`` runs farthest-first traversal, whose value is
    within a factor 2 of the optimum.
    """
    X = as_points(X)
    if ell <= 0:
        raise InvalidInputError("ell must be >= 1")
    n, d = X.shape
    if mode not in ("exact", "approx"):
        raise InvalidInputError(f"unknown mode {mode!r}")
    if ell >= n_distinct(X):
        a = _duplicate_groups(X)
        return DiameterPartition(a, 0.0, True, int(a.max()) + 1)
    if ell == 1:
        a = np.zeros(n, dtype=np.int64)
        return DiameterPartition(a, partition_diameter(X, a), True, 1)
    if mode == "approx":
        a = farthest_first_partition(X, ell)
        return DiameterPartition(a, partition_diameter(X, a), False, int(a.max()) + 1)
    if d == 1:
        a, value = _mmd_1d(X[:, 0], ell)
    elif n <= DIAM_ENUM_MAX_N or ell <= 2:
        a, value = _mmd_matrix(pairwise_dist(X), ell)
    else:
        raise UnsupportedInstanceError(
            f"exact diameter partition needs 1-D input, n <= {DIAM_ENUM_MAX_N} or ell <= 2"
        )
    return DiameterPartition(a, value, True, int(a.max()) + 1)


def diam_ell(X, ell: int, mode: str = "exact") -> float:
    return min_max_diameter_partition(X, ell, mode).value


# --------------------------------------------------------------------------
# aspect ratio and good points


def _extreme_distances(X: np.ndarray) -> tuple[float, float]:
    if X.shape[1] == 1:
        v = np.sort(X[:, 0])
        return float(v[-1] - v[0]), float(np.diff(v).min())
    iu = np.triu_indices(len(X), 1)
    diff = X[iu[0]] - X[iu[1]]
    # scale each difference first so tiny or huge distances neither underflow nor overflow
    scale = np.abs(diff).max(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        unit = np.where(scale[:, None] > 0, diff / scale[:, None], 0.0)
    D = scale * np.sqrt(np.einsum("ij,ij->i", unit, unit))
    return float(D.max()), float(D.min())


def aspect_ratio(X) -> float:
    """Largest pairwise distance over the smallest, across distinct indices.

    Raises
    ------
    UndefinedRatioError
        For singletons or when two points coincide.
    """
    X = as_points(X)
    if len(X) < 2:
        raise UndefinedRatioError("aspect ratio needs at least two points")
    far, near = _extreme_distances(X)
    if near == 0.0:
        raise UndefinedRatioError("aspect ratio undefined: minimum pairwise distance is 0")
    return far / near


def log2_aspect_ratio(X) -> float:
    """``log2`` of the aspect ratio, finite even when the ratio overflows a float."""
    X = as_points(X)
    if len(X) < 2:
        raise UndefinedRatioError("aspect ratio needs at least two points")
    far, near = _extreme_distances(X)
    if near == 0.0:
        raise UndefinedRatioError("aspect ratio undefined: minimum pairwise distance is 0")
    ratio = far / near
    if math.isfinite(ratio):
        return math.log2(ratio)
    return math.log2(far) - math.log2(near)


def good_points(S) -> np.ndarray:
    """Indices of points ``x`` in ``S`` whose single-center cost is at most 3 L(S)."""
    S = as_points(S)
    if len(S) == 0:
        raise InvalidInputError("good points of an empty set are undefined")
    L = one_means_cost(S)
    costs = np.array([sq_dists_to(S, x).sum() for x in S])
    return np.array([i for i, c in enumerate(costs) if leq(float(c), 3.0 * L)], dtype=np.int64)
