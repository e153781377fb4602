"""(alpha, k)-sequences and the Online Center measure OC_k(X).

An ordered list of points is an (alpha, k)-sequence when every point is
farther from all its predecessors than ``alpha`` times the best
(k-1)-diameter of those predecessors. OC_k(X) is the length of the longest
(2, k)-sequence that can be formed from distinct points of X, in any order.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InvalidInputError, NosubError, UnsupportedInstanceError
from .metric import (
    as_points,
    dedupe,
    exact_diameter_feasible,
    log2_aspect_ratio,
    min_max_diameter_partition,
    pairwise_dist,
    sq_dists_to,
    strictly_greater,
)

OC_EXACT_MAX_N = 15
OC_ALPHA = 2.0


@dataclass
class SequenceCertificate:
    indices: list[int]
    alpha: float
    k: int
    margins: list[float]
    # False when some prefix diameter came from the 2-approximation
    certified: bool = True

    def __len__(self):
        return len(self.indices)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass
class SequenceVerdict:
    accepted: bool
    margins: list[float]
    certified: bool
    indices: list[int]
    alpha: float
    k: int
    failed_at: int | None = None  # 1-based position of the first failing point

    @property
    def certificate(self) -> SequenceCertificate | None:
        if not self.accepted:
            return None
        return SequenceCertificate(list(self.indices), self.alpha, self.k, list(self.margins), self.certified)

    @property
    def sound_reject_only(self) -> bool:
        return not self.certified


@dataclass
class OcEstimate:
    lower: int
    upper: int
    exact: bool
    method: str
    witness: list[int] = field(default_factory=list)

    def __str__(self):
        return f"{self.lower} ≤ OC ≤ {self.upper} ({self.method})"

    def to_dict(self) -> dict:
        return asdict(self)


def _prefix_diam(P: np.ndarray, ell: int, mode: str) -> tuple[float, bool]:
    if ell >= len(P):
        return 0.0, True
    if mode == "approx":
        part = min_max_diameter_partition(P, ell, "approx")
    elif mode == "exact" or exact_diameter_feasible(len(P), P.shape[1], ell):
        part = min_max_diameter_partition(P, ell, "exact")
    else:
        part = min_max_diameter_partition(P, ell, "approx")
    return part.value, part.exact


def verify_alpha_k_sequence(points, order, alpha: float, k: int, diam_mode: str = "auto") -> SequenceVerdict:
    """Check whether ``points[order]`` is an (alpha, k)-sequence.

    ``diam_mode`` picks how prefix (k-1)-diameters are computed: ``"exact"``
    (raises when infeasible), ``"approx"`` or ``"auto"`` (exact whenever
    feasible). An approximate diameter never underestimates, so acceptance is
    always sound; a rejection made with an approximate diameter is flagged via
    ``certified=False``.
    """
    if not alpha > 1:
        raise InvalidInputError("alpha must be > 1")
    if k < 2:
        raise InvalidInputError("k must be >= 2")
    if diam_mode not in ("auto", "exact", "approx"):
        raise InvalidInputError(f"unknown diam_mode {diam_mode!r}")
    X = as_points(points)
    idx = [int(i) for i in order]
    if any(i < 0 or i >= len(X) for i in idx):
        raise InvalidInputError("sequence index out of range")
    S = X[idx]
    margins: list[float] = []
    certified = True
    for j in range(1, len(S)):
        mind = math.sqrt(float(sq_dists_to(S[:j], S[j]).min()))
        diam, exact = _prefix_diam(S[:j], k - 1, diam_mode)
        certified &= exact
        margins.append(mind - alpha * diam)
        if not strictly_greater(mind, alpha * diam):
            return SequenceVerdict(False, margins, certified, idx, alpha, k, failed_at=j + 1)
    return SequenceVerdict(True, margins, certified, idx, alpha, k)


# --------------------------------------------------------------------------
# the OC measure


def oc_upper_bound_aspect(X, k: int) -> int:
    """Upper bound ``k (floor(log2 asp) + 1) + 1`` on OC_k(X), duplicates removed.

    Any (2, k)-sequence contains a chain of nearest-predecessor distances that
    at least doubles every <= k-1 steps, and the chain lives inside the
    aspect ratio. Returns 1 when all points coincide.
    """
    Xd = dedupe(X)
    if len(Xd) < 2:
        return 1
    return k * (math.floor(log2_aspect_ratio(Xd)) + 1) + 1


def oc_exact(X, k: int) -> OcEstimate:
    """Exact OC_k(X) for n <= 15 by breadth-first search over point subsets.

    Whether a point may extend a sequence depends only on the set of points
    already used, so the search runs layer by layer over subsets (bitmasks),
    keeping the lexicographically smallest ordering that reaches each one.
    """
    X = as_points(X)
    n = len(X)
    if n > OC_EXACT_MAX_N:
        raise UnsupportedInstanceError(f"exact OC supports n <= {OC_EXACT_MAX_N}, got {n}")
    if k < 2:
        raise InvalidInputError("k must be >= 2")
    D = pairwise_dist(X)
    bit = [1 << i for i in range(n)]
    layer: dict[int, tuple[int, ...]] = {bit[i]: (i,) for i in range(n)}
    best = min(layer.values())
    while layer:
        nxt: dict[int, tuple[int, ...]] = {}
        for mask, seq in layer.items():
            members = list(seq)
            diam, _ = _prefix_diam(X[members], k - 1, "exact")
            threshold = OC_ALPHA * diam
            mind = D[members].min(axis=0)
            for j in range(n):
                if mask & bit[j] or not strictly_greater(float(mind[j]), threshold):
                    continue
                m2 = mask | bit[j]
                cand = seq + (j,)
                if m2 not in nxt or cand < nxt[m2]:
                    nxt[m2] = cand
        if nxt:
            best = min(nxt.values())
        layer = nxt
    return OcEstimate(len(best), len(best), True, "exhaustive", list(best))


def _greedy_sequence(X: np.ndarray, k: int, start: int | None) -> list[int]:
    """Grow a (2, k)-sequence greedily.

    ``start=None`` scans points in arrival order and appends each one that
    qualifies. Otherwise the sequence starts at ``start`` and repeatedly takes
    the qualifying point nearest to the current set.
    """
    n = len(X)
    if start is None:
        seq = [0]
        mind = sq_dists_to(X, X[0])
        for j in range(1, n):
            diam, _ = _prefix_diam(X[seq], k - 1, "auto")
            if strictly_greater(math.sqrt(float(mind[j])), OC_ALPHA * diam):
                seq.append(j)
                np.minimum(mind, sq_dists_to(X, X[j]), out=mind)
        return seq
    seq = [start]
    used = np.zeros(n, dtype=bool)
    used[start] = True
    mind = sq_dists_to(X, X[start])
    while True:
        diam, _ = _prefix_diam(X[seq], k - 1, "auto")
        thr = OC_ALPHA * diam
        d = np.sqrt(mind)
        ok = ~used & (d > thr)
        ok &= ~np.isclose(d, thr, rtol=1e-9, atol=0.0)
        if not ok.any():
            return seq
        cand = np.flatnonzero(ok)
        j = int(cand[np.argmin(d[cand])])
        seq.append(j)
        used[j] = True
        np.minimum(mind, sq_dists_to(X, X[j]), out=mind)


def oc_greedy_lower(X, k: int, restarts: int = 8, seed: int = 0) -> OcEstimate:
    """Lower bound on OC_k(X) from randomized greedy sequence building.

    The first attempt scans in arrival order; the remaining ``restarts - 1``
    start from random points. Every witness is re-verified before it counts.
    The upper end of the bracket is the aspect-ratio bound, capped at n.
    """
    X = as_points(X)
    if k < 2:
        raise InvalidInputError("k must be >= 2")
    n = len(X)
    rng = np.random.default_rng(seed)
    starts = [None] + [int(s) for s in rng.integers(n, size=max(0, restarts - 1))]
    best: list[int] = [0]
    for s in starts:
        seq = _greedy_sequence(X, k, s)
        if len(seq) > len(best) and verify_alpha_k_sequence(X, seq, OC_ALPHA, k).accepted:
            best = seq
    upper = min(n, oc_upper_bound_aspect(X, k))
    return OcEstimate(len(best), upper, len(best) == upper, "greedy-restart", best)


def oc_bracket(X, k: int, restarts: int = 8, seed: int = 0) -> OcEstimate:
    """Exact OC when n <= 15, otherwise the greedy / aspect-ratio bracket."""
    X = as_points(X)
    if len(X) <= OC_EXACT_MAX_N:
        return oc_exact(X, k)
    est = oc_greedy_lower(X, k, restarts, seed)
    if not est.exact:
        est.method = "aspect-bound"
    return est


# --------------------------------------------------------------------------
# changing the separation factor


def steps_per_factor(alpha: float, beta: float) -> int:
    """``ceil(log_alpha beta)``, at least 1."""
    if not (alpha > 1 and beta >= alpha):
        raise InvalidInputError("need 1 < alpha <= beta")
    s = 1
    while alpha**s < beta * (1 - 1e-12):
        s += 1
    return s


def conversion_length_bounds(n: int, k: int, alpha: float, beta: float) -> tuple[int, int]:
    """Guaranteed sub-sequence lengths when converting an (alpha, k)- to a (beta, k)-sequence.

    Returns ``(floor(n / (k ceil(log_a b))), floor(n / (2 k log_a b)))``; the
    construction in :func:`extract_beta_subsequence` meets the first.
    """
    s = steps_per_factor(alpha, beta)
    constructive = n // (k * s)
    stated = math.floor(n / (2 * k * math.log(beta) / math.log(alpha)))
    return constructive, stated


def extract_beta_subsequence(points, cert: SequenceCertificate, beta: float) -> SequenceCertificate:
    """Thin an (alpha, k)-sequence into a (beta, k)-sequence.

    Walks back from the last point, each time stepping 1..k-1 positions to an
    earlier point whose nearest-predecessor distance is more than ``alpha``
    times smaller; this chain grows geometrically. Keeping every ``s``-th chain
    element, ``s = ceil(log_alpha beta)``, gives the output.

    Raises
    ------
    InvalidInputError
        If ``cert`` does not verify on ``points``.
    """
    X = as_points(points)
    alpha, k = cert.alpha, cert.k
    if not verify_alpha_k_sequence(X, cert.indices, alpha, k).accepted:
        raise InvalidInputError("input certificate does not verify")
    s = steps_per_factor(alpha, beta)
    S = X[cert.indices]
    m = len(S)
    # d[p] for 1-based position p >= 2: distance to nearest predecessor
    d = np.full(m + 1, np.nan)
    for p in range(2, m + 1):
        d[p] = math.sqrt(float(sq_dists_to(S[: p - 1], S[p - 1]).min()))
    chain = [m]
    p = m
    while p > k:
        steps = range(1, k)
        good = [i for i in steps if d[p] > alpha * d[p - i]]
        if good:
            i = good[0]
        else:
            i = max(steps, key=lambda i: d[p] / d[p - i])
        p -= i
        chain.append(p)
    chain.reverse()
    picked = chain[s - 1 :: s] or chain[:1]
    out = [cert.indices[q - 1] for q in picked]
    verdict = verify_alpha_k_sequence(X, out, beta, k)
    if not verdict.accepted:
        raise NosubError(f"extracted sub-sequence failed to verify at beta={beta}")
    return verdict.certificate


# --------------------------------------------------------------------------
# lower bound on centers


def lower_bound_centers(oc: int, k: int, n: int, alpha: float) -> float:
    """Centers any alpha-approximate online algorithm must take on a worst ordering.

    ``0.9 * floor(oc / (k * ceil(log2(sqrt(n alpha) / 2))))``
    """
    if oc < 0 or k < 1 or n < 1 or alpha < 1:
        raise InvalidInputError("need oc >= 0, k >= 1, n >= 1, alpha >= 1")
    factor = 0.5 * math.sqrt(n * alpha)
    if factor <= 1:
        raise InvalidInputError("sqrt(n alpha) / 2 must exceed 1")
    lg = math.log2(factor)
    steps = round(lg) if math.isclose(lg, round(lg), abs_tol=1e-12) else math.ceil(lg)
    return 0.9 * (oc // (k * steps))


# --------------------------------------------------------------------------
# analysis graph of a traced run


@dataclass
class AnalysisGraph:
    n: int
    p_sizes: list[int]
    q_sizes: list[int]
    out_degree: list[int]
    s: list[int]
    edges: list[tuple[int, int]]  # (j, i): x_i in P_j or Q_j; 0-based, self-loops included
    independent_set: list[int] = field(default_factory=list)

    def adjacency(self) -> list[set[int]]:
        """Undirected neighbour sets without self-loops."""
        adj = [set() for _ in range(self.n)]
        for j, i in self.edges:
            if i != j:
                adj[i].add(j)
                adj[j].add(i)
        return adj


def build_analysis_graph(run, X, seed: int = 0) -> AnalysisGraph:
    """Graph with an edge from each time step to the points in ``P_t ∪ Q_t``.

    ``P_t`` is the merged cluster of ``x_t``; ``Q_t`` holds the other prefix
    points at distance at least ``r_t / 5`` from their own center (empty when
    every cluster was merged). The run must be traced with
    ``retain_clusterings=True``.
    """
    pts = as_points(X.points if hasattr(X, "points") else X)
    trace = run.trace
    if len(trace) != len(pts) or any(r.ranked_assignment is None for r in trace):
        raise InvalidInputError("analysis graph needs a full trace with retained clusterings")
    edges: list[tuple[int, int]] = []
    p_sizes, q_sizes, degree, s = [], [], [], []
    for rec in trace:
        j = rec.t - 1
        prefix = pts[: rec.t]
        label = rec.ranked_assignment
        in_p = label < rec.v_t
        if math.isinf(rec.r_t):
            in_q = np.zeros_like(in_p)
        else:
            diff = prefix - rec.ranked_centers[label]
            own = np.sqrt(np.einsum("ij,ij->i", diff, diff))
            in_q = ~in_p & (own >= rec.r_t / 5.0)
        targets = np.flatnonzero(in_p | in_q)
        edges.extend((j, int(i)) for i in targets)
        p_sizes.append(int(in_p.sum()))
        q_sizes.append(int(in_q.sum()))
        degree.append(len(targets))
        s.append(rec.s_t)
    g = AnalysisGraph(len(pts), p_sizes, q_sizes, degree, s, edges)
    g.independent_set = greedy_independent_set(g.adjacency(), seed=seed)
    return g


def chained_center_bound(s_values, n: int) -> float:
    """``sum_t 1/s_t / (8 (log2 n + 1))``, a lower bound on the largest independent set."""
    return float(np.sum(1.0 / np.asarray(s_values, dtype=np.float64))) / (8.0 * (math.log2(n) + 1.0))


def _greedy_in_order(adj: list[set[int]], order) -> list[int]:
    blocked = np.zeros(len(adj), dtype=bool)
    chosen = []
    for v in order:
        if not blocked[v]:
            chosen.append(int(v))
            blocked[v] = True
            blocked[list(adj[v])] = True
    return chosen


def _min_degree_greedy(adj: list[set[int]]) -> list[int]:
    alive = set(range(len(adj)))
    deg = {v: len(adj[v]) for v in alive}
    chosen = []
    while alive:
        v = min(alive, key=lambda u: (deg[u], u))
        chosen.append(v)
        gone = ({v} | adj[v]) & alive
        alive -= gone
        for u in gone:
            for w in adj[u] & alive:
                deg[w] -= 1
    return chosen


def greedy_independent_set(adj, orders: int = 32, seed: int = 0) -> list[int]:
    """Largest of several greedy independent sets, sorted ascending.

    Candidates are random-order greedy passes (``orders`` seeded permutations)
    plus one minimum-degree greedy pass, which always reaches
    ``ceil(|V| / (avg_degree + 1))``.
    """
    if isinstance(adj, AnalysisGraph):
        adj = adj.adjacency()
    adj = [set(a) for a in adj]
    n = len(adj)
    if n == 0:
        return []
    rng = np.random.default_rng(seed)
    best = _min_degree_greedy(adj)
    for _ in range(orders):
        cand = _greedy_in_order(adj, rng.permutation(n))
        if len(cand) > len(best):
            best = cand
    avg_degree = sum(len(a) for a in adj) / n
    if len(best) < math.ceil(n / (avg_degree + 1) - 1e-12):
        raise NosubError("greedy independent set fell below the Turán bound")
    return sorted(best)
