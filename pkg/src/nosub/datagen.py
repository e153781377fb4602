"""Synthetic data: mixtures, adversarial geometric series and arrival orders."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .metric import Dataset

COMPONENT_KINDS = ("gaussian", "uniform-box", "exponential")
ORDERING_POLICIES = (
    "as-generated",
    "uniform-random-permutation",
    "sorted-by-norm",
    "reverse-sorted",
    "interleave-components",
)
MAX_COORD = 1e300


@dataclass
class ComponentSpec:
    """One mixture component.

    ``scale`` is a standard deviation for ``gaussian``, a half-width for
    ``uniform-box`` and the mean offset (1 / rate) for ``exponential``, which
    is coordinate-wise and shifted to start at ``location``. Scalars broadcast
    over dimensions.
    """

    kind: str
    location: list[float]
    scale: float | list[float] = 1.0

    def __post_init__(self):
        if self.kind not in COMPONENT_KINDS:
            raise InvalidInputError(f"unknown component kind {self.kind!r}")
        self.location = [float(v) for v in np.atleast_1d(self.location)]
        sc = np.atleast_1d(np.asarray(self.scale, dtype=np.float64))
        if not np.all(np.isfinite(sc)) or np.any(sc <= 0):
            raise InvalidInputError("component scale must be finite and positive")

    def scales(self, dim: int) -> np.ndarray:
        sc = np.broadcast_to(np.asarray(self.scale, dtype=np.float64), (dim,))
        return np.array(sc)

    def sample(self, rng: np.random.Generator, m: int, dim: int) -> np.ndarray:
        loc = np.asarray(self.location)
        sc = self.scales(dim)
        if self.kind == "gaussian":
            return loc + sc * rng.standard_normal((m, dim))
        if self.kind == "uniform-box":
            return loc + sc * rng.uniform(-1.0, 1.0, (m, dim))
        return loc + rng.exponential(1.0, (m, dim)) * sc

    def to_dict(self) -> dict:
        scale = self.scale if np.isscalar(self.scale) else [float(s) for s in self.scale]
        return {"kind": self.kind, "location": list(self.location), "scale": scale}


@dataclass
class MixtureSpec:
    components: list[ComponentSpec]
    weights: list[float] | None = None
    dim: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if not self.components:
            raise InvalidInputError("a mixture needs at least one component")
        self.components = [c if isinstance(c, ComponentSpec) else ComponentSpec(**c) for c in self.components]
        if self.dim is None:
            self.dim = len(self.components[0].location)
        if any(len(c.location) != self.dim for c in self.components):
            raise InvalidInputError("component locations must all have dimension dim")
        if self.weights is None:
            self.weights = [1.0 / len(self.components)] * len(self.components)
        w = np.asarray(self.weights, dtype=np.float64)
        if len(w) != len(self.components) or np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise InvalidInputError("weights must be a probability vector, one entry per component")
        self.weights = [float(v) for v in w]

    @property
    def k_gen(self) -> int:
        return len(self.components)

    def to_dict(self) -> dict:
        return {
            "components": [c.to_dict() for c in self.components],
            "weights": list(self.weights),
            "dim": self.dim,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MixtureSpec":
        return cls(
            components=[ComponentSpec(**c) for c in d["components"]],
            weights=d.get("weights"),
            dim=d.get("dim"),
            seed=d.get("seed"),
        )


@dataclass
class OrderingSpec:
    policy: str = "as-generated"
    seed: int | None = None

    def __post_init__(self):
        if self.policy not in ORDERING_POLICIES:
            raise InvalidInputError(f"unknown ordering policy {self.policy!r}")

    def to_dict(self) -> dict:
        return {"policy": self.policy, "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "OrderingSpec":
        return cls(policy=d.get("policy", "as-generated"), seed=d.get("seed"))


def sample_mixture(spec: MixtureSpec, n: int, seed: int | None = None) -> Dataset:
    """Draw ``n`` i.i.d. points; labels record the component of each draw.

    ``seed`` overrides ``spec.seed`` when given.
    """
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    seed = spec.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    labels = rng.choice(spec.k_gen, size=n, p=spec.weights)
    points = np.empty((n, spec.dim))
    for c, comp in enumerate(spec.components):
        idx = np.flatnonzero(labels == c)
        if len(idx):
            points[idx] = comp.sample(rng, len(idx), spec.dim)
    return Dataset(points, labels, seed)


def exponential_adversary(n: int, alpha: float) -> Dataset:
    """The points ``(2 alpha)^t`` for ``t = 1..n`` on the line, in ascending order."""
    if n < 1 or alpha < 1:
        raise InvalidInputError("need n >= 1 and alpha >= 1")
    if n * math.log10(2 * alpha) > math.log10(MAX_COORD):
        raise InvalidInputError(f"(2 alpha)^n exceeds {MAX_COORD:g}; reduce n")
    base = 2.0 * alpha
    return Dataset(base ** np.arange(1, n + 1, dtype=np.float64))


def hard_sequence_factor(n: int, alpha: float) -> float:
    """Separation factor ``sqrt(n alpha) / 2`` of :func:`make_hard_sequence`."""
    return 0.5 * math.sqrt(n * alpha)


def make_hard_sequence(n: int, alpha: float, k: int) -> Dataset:
    """Geometric series with ratio ``sqrt(n alpha)``.

    The exponents are centered on 0 (points ``r^(t - c)``), so squared
    distances stay representable: the whole series spans at most 1e300 in
    ratio. The series is a (sqrt(n alpha)/2, k)-sequence whenever that factor
    exceeds 1; being 1-D and geometric, the check holds for every k >= 2.
    """
    if n < 1 or alpha < 1 or k < 2:
        raise InvalidInputError("need n >= 1, alpha >= 1 and k >= 2")
    ratio = math.sqrt(n * alpha)
    if (n - 1) * math.log10(ratio) > math.log10(MAX_COORD):
        raise InvalidInputError("series too long for float64; reduce n or alpha")
    centre = (n + 1) // 2
    return Dataset(ratio ** (np.arange(1, n + 1, dtype=np.float64) - centre))


def ordering_permutation(X: Dataset, spec: OrderingSpec) -> np.ndarray:
    n = X.n
    if spec.policy == "as-generated":
        return np.arange(n)
    if spec.policy == "uniform-random-permutation":
        return np.random.default_rng(spec.seed).permutation(n)
    norms = np.linalg.norm(X.points, axis=1)
    if spec.policy == "sorted-by-norm":
        return np.argsort(norms, kind="stable")
    if spec.policy == "reverse-sorted":
        return np.argsort(-norms, kind="stable")
    if X.labels is None:
        raise InvalidInputError("interleave-components needs labelled data")
    # round-robin over components, each in its generated order
    queues = [list(np.flatnonzero(X.labels == c)) for c in np.unique(X.labels)]
    perm = []
    while any(queues):
        for q in queues:
            if q:
                perm.append(q.pop(0))
    return np.asarray(perm, dtype=np.int64)


def apply_ordering(X: Dataset, spec: OrderingSpec) -> Dataset:
    """Reorder ``X`` (points and labels together) according to ``spec.policy``."""
    return X.subset(ordering_permutation(X, spec))
