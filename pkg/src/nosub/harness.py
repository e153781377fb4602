"""Seeded experiments over the online algorithm, and the mixture scaling study.

Trial ``i`` of an experiment uses seed ``base_seed + i``. The offline plan of
the stream is computed once per experiment, so trials differ only in their
coin flips.
"""

from __future__ import annotations

import hashlib
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import io as nio
from .datagen import (
    MixtureSpec,
    OrderingSpec,
    apply_ordering,
    exponential_adversary,
    make_hard_sequence,
    sample_mixture,
)
from .errors import InvalidInputError, UndefinedRatioError, UnsupportedInstanceError
from .metric import Dataset, aspect_ratio, dedupe, opt_kmeans_cost_oracle
from .online import OnlineConfig, OnlineRun, plan_online, run_online
from .sequences import OcEstimate, lower_bound_centers, oc_bracket, oc_greedy_lower

APPROX_CONSTANT = 1358.0
CENTER_CONSTANT = 160.0
SUCCESS_FRACTION = 0.85  # empirical stand-in for "with probability 0.9"
SUM_FORM_SE = 5.0
ROW_COLUMNS = (
    "trial",
    "seed",
    "n_centers",
    "final_cost",
    "oracle_cost",
    "cost_ratio",
    "expected_centers",
    "runtime",
)
RUNTIME_KEYS = ("runtime", "elapsed", "total_runtime")
CHECK_NAMES = ("approximation", "center-count", "sum-form", "lower-bound")


def worker_count() -> int:
    cap = os.environ.get("NOSUB_THREADS")
    if cap:
        try:
            return max(1, int(cap))
        except ValueError:
            raise InvalidInputError(f"NOSUB_THREADS must be an integer, got {cap!r}") from None
    return min(4, os.cpu_count() or 1)


def approx_bound(k: int, alpha_a: float, opt_cost: float) -> float:
    """``1358 alpha k^3 L_k(X)``."""
    return APPROX_CONSTANT * alpha_a * k**3 * opt_cost


def center_bound(k: int, oc: int, n: int) -> float:
    """``160 k ln(k) OC (log2 n + 1)``."""
    return CENTER_CONSTANT * k * math.log(k) * oc * (math.log2(n) + 1.0)


def online_alpha(k: int, alpha_a: float) -> float:
    """Approximation factor guaranteed for the online algorithm."""
    return APPROX_CONSTANT * alpha_a * k**3


# --------------------------------------------------------------------------
# dataset sources


def load_source(source) -> Dataset:
    """Build a dataset from a path, a :class:`Dataset` or a generator dict.

    Generator dicts carry ``kind`` in ``{"mixture", "exponential", "hard"}``:
    ``{"kind": "mixture", "mixture": {...}, "n": 500, "seed": 1}``,
    ``{"kind": "exponential", "n": 10, "alpha": 2}`` or
    ``{"kind": "hard", "n": 64, "alpha": 10864, "k": 2}``.
    """
    if isinstance(source, Dataset):
        return source
    if isinstance(source, (str, os.PathLike)):
        return nio.read_dataset_csv(source)
    if not isinstance(source, dict) or "kind" not in source:
        raise InvalidInputError("dataset source must be a path, a Dataset or a generator dict")
    kind = source["kind"]
    try:
        if kind == "mixture":
            spec = MixtureSpec.from_dict(source["mixture"])
            return sample_mixture(spec, int(source["n"]), source.get("seed"))
        if kind == "exponential":
            return exponential_adversary(int(source["n"]), float(source["alpha"]))
        if kind == "hard":
            return make_hard_sequence(int(source["n"]), float(source["alpha"]), int(source["k"]))
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"bad generator spec: {exc}") from None
    raise InvalidInputError(f"unknown generator kind {kind!r}")


def generate(spec: dict) -> Dataset:
    """Generator dict plus optional ``ordering`` entry, as read by ``nosub generate``."""
    X = load_source(spec)
    if "ordering" in spec:
        X = apply_ordering(X, OrderingSpec.from_dict(spec["ordering"]))
    return X


# --------------------------------------------------------------------------
# experiments


@dataclass
class ExperimentSpec:
    source: object
    config: OnlineConfig
    trials: int = 100
    base_seed: int = 0
    ordering: OrderingSpec = field(default_factory=OrderingSpec)
    checks: list[str] = field(default_factory=list)
    oc_restarts: int = 8

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidInputError("trials must be >= 1")
        unknown = set(self.checks) - set(CHECK_NAMES)
        if unknown:
            raise InvalidInputError(f"unknown checks: {sorted(unknown)}")

    def trial_seed(self, i: int) -> int:
        return self.base_seed + i


@dataclass
class CheckOutcome:
    name: str
    passed: bool
    detail: str

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class ExperimentReport:
    n: int
    dim: int
    k: int
    alpha_a: float
    rows: list[dict]
    aggregates: dict
    oc: OcEstimate
    oracle_cost: float | None
    sum_p: float
    sum_p_var: float
    bounds: dict
    checks: list[CheckOutcome]
    config: dict
    runs: list[OnlineRun] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self, include_runtime: bool = True) -> dict:
        d = {
            "n": self.n,
            "dim": self.dim,
            "k": self.k,
            "alpha_a": self.alpha_a,
            "oracle_cost": self.oracle_cost,
            "sum_p": self.sum_p,
            "oc": self.oc.to_dict(),
            "bounds": dict(self.bounds),
            "aggregates": dict(self.aggregates),
            "checks": [c.to_dict() for c in self.checks],
            "config": self.config,
            "rows": [dict(r) for r in self.rows],
        }
        if not include_runtime:
            d = _strip_runtime(d)
        return d

    def to_json(self) -> str:
        return nio.dumps(self.to_dict())

    def digest(self) -> str:
        """SHA-256 of the report without runtime fields; equal for equal specs."""
        return hashlib.sha256(nio.dumps(self.to_dict(include_runtime=False)).encode()).hexdigest()

    def rows_csv(self) -> str:
        lines = [",".join(ROW_COLUMNS)]
        for r in self.rows:
            lines.append(",".join(_fmt(r[c]) for c in ROW_COLUMNS))
        return "\n".join(lines) + "\n"


def _strip_runtime(obj):
    if isinstance(obj, dict):
        return {k: _strip_runtime(v) for k, v in obj.items() if k not in RUNTIME_KEYS}
    if isinstance(obj, list):
        return [_strip_runtime(v) for v in obj]
    return obj


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def summarize(values) -> dict:
    v = np.asarray([x for x in values if x is not None], dtype=np.float64)
    if len(v) == 0:
        return {"mean": None, "std": None, "min": None, "q10": None, "median": None, "q90": None, "max": None}
    q = np.quantile(v, [0.1, 0.5, 0.9])
    return {
        "mean": float(v.mean()),
        "std": float(v.std(ddof=1)) if len(v) > 1 else 0.0,
        "min": float(v.min()),
        "q10": float(q[0]),
        "median": float(q[1]),
        "q90": float(q[2]),
        "max": float(v.max()),
    }


def aggregate_rows(rows: list[dict]) -> dict:
    return {
        "trials": len(rows),
        "n_centers": summarize(r["n_centers"] for r in rows),
        "cost_ratio": summarize(r["cost_ratio"] for r in rows),
        "final_cost": summarize(r["final_cost"] for r in rows),
    }


def _oracle(X: Dataset, k: int) -> float | None:
    try:
        return opt_kmeans_cost_oracle(X.points, k)
    except UnsupportedInstanceError:
        return None


def run_experiment(spec: ExperimentSpec, keep_runs: bool = False) -> ExperimentReport:
    """Run ``spec.trials`` seeded trials and evaluate the requested checks."""
    cfg = spec.config
    k = cfg.k
    X = apply_ordering(load_source(spec.source), spec.ordering)
    n = X.n
    schedule = plan_online(X.points, cfg)
    oracle = _oracle(X, k)
    alpha_a = cfg.solver.alpha_claim

    def trial(i: int):
        seed = spec.trial_seed(i)
        t0 = time.perf_counter()
        run = run_online(X.points, cfg.with_seed(seed), schedule)
        elapsed = time.perf_counter() - t0
        if oracle is None:
            ratio = None
        elif oracle > 0:
            ratio = run.final_cost / oracle
        else:
            ratio = 0.0 if run.final_cost == 0 else math.inf
        row = {
            "trial": i,
            "seed": seed,
            "n_centers": run.n_centers,
            "final_cost": run.final_cost,
            "oracle_cost": oracle,
            "cost_ratio": ratio,
            "expected_centers": run.expected_centers,
            "runtime": elapsed,
        }
        return row, run

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        results = list(pool.map(trial, range(spec.trials)))
    rows = [r for r, _ in results]
    runs = [run for _, run in results] if keep_runs else []

    p = np.array([s.p_t for s in schedule])
    sum_p = float(p.sum())
    sum_p_var = float((p * (1 - p)).sum())
    oc = oc_bracket(X.points, k, restarts=spec.oc_restarts, seed=spec.base_seed)
    bounds = {
        "approx_rhs": approx_bound(k, alpha_a, oracle) if oracle is not None else None,
        "approx_factor": online_alpha(k, alpha_a),
        "center_rhs_lower": center_bound(k, oc.lower, n),
        "center_rhs_upper": center_bound(k, oc.upper, n),
        "lower_bound_centers": _safe_lower_bound(oc.lower, k, n, online_alpha(k, alpha_a)),
    }
    report = ExperimentReport(
        n=n,
        dim=X.dim,
        k=k,
        alpha_a=alpha_a,
        rows=rows,
        aggregates=aggregate_rows(rows),
        oc=oc,
        oracle_cost=oracle,
        sum_p=sum_p,
        sum_p_var=sum_p_var,
        bounds=bounds,
        checks=[],
        config={
            "online": cfg.to_dict(),
            "trials": spec.trials,
            "base_seed": spec.base_seed,
            "ordering": spec.ordering.to_dict(),
        },
        runs=runs,
    )
    report.checks = [evaluate_check(name, report) for name in spec.checks]
    return report


def _safe_lower_bound(oc: int, k: int, n: int, alpha: float) -> float | None:
    try:
        return lower_bound_centers(oc, k, n, alpha)
    except InvalidInputError:
        return None


def evaluate_check(name: str, report: ExperimentReport) -> CheckOutcome:
    rows = report.rows
    trials = len(rows)
    if name == "approximation":
        if report.oracle_cost is None:
            return CheckOutcome(name, False, "no exact oracle for this instance")
        factor = report.bounds["approx_factor"]
        ok = sum(1 for r in rows if r["cost_ratio"] <= factor * (1 + 1e-9))
        need = SUCCESS_FRACTION * trials
        return CheckOutcome(name, ok >= need, f"{ok}/{trials} trials with ratio <= {factor:g} (need {need:g})")
    if name == "center-count":
        mean = report.aggregates["n_centers"]["mean"]
        # the lower end of the OC bracket gives a bound no larger than the true one
        rhs = report.bounds["center_rhs_lower"]
        return CheckOutcome(name, mean <= rhs, f"mean centers {mean:.4g} <= {rhs:.6g}")
    if name == "sum-form":
        mean = report.aggregates["n_centers"]["mean"]
        se = math.sqrt(report.sum_p_var / trials)
        gap = abs(mean - report.sum_p)
        ok = gap <= SUM_FORM_SE * se + 1e-9 * max(1.0, report.sum_p)
        return CheckOutcome(name, ok, f"|{mean:.6g} - {report.sum_p:.6g}| = {gap:.3g} <= 5 SE = {SUM_FORM_SE * se:.3g}")
    if name == "lower-bound":
        frac = report.aggregates["n_centers"]["mean"] / report.n
        return CheckOutcome(name, frac >= 0.9, f"mean fraction selected {frac:.4f} >= 0.9")
    raise InvalidInputError(f"unknown check {name!r}")


# --------------------------------------------------------------------------
# mixture scaling


SCALING_COLUMNS = (
    "source",
    "n",
    "seed",
    "max_component_aspect",
    "aspect_oc_bound",
    "oc_lower",
    "oc_upper",
    "centers",
    "envelope",
    "within",
)


@dataclass
class ScalingReport:
    k: int
    n_grid: list[int]
    seeds: list[int]
    c0: float | None
    rows: list[dict]
    contrast: list[dict]
    fraction_within: float | None

    @property
    def passed(self) -> bool:
        return self.fraction_within is not None and self.fraction_within >= 0.95

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n_grid": list(self.n_grid),
            "seeds": list(self.seeds),
            "c0": self.c0,
            "fraction_within": self.fraction_within,
            "passed": self.passed,
            "rows": self.rows,
            "contrast": self.contrast,
        }

    def to_csv(self) -> str:
        lines = [",".join(SCALING_COLUMNS)]
        for r in self.rows + self.contrast:
            lines.append(",".join(_fmt(r.get(c)) for c in SCALING_COLUMNS))
        return "\n".join(lines) + "\n"


def component_aspects(X: Dataset) -> list[float | None]:
    """Aspect ratio of each labelled component; None where it is undefined."""
    if X.labels is None:
        raise InvalidInputError("component aspect ratios need labelled data")
    out = []
    for c in np.unique(X.labels):
        try:
            out.append(aspect_ratio(X.points[X.labels == c]))
        except UndefinedRatioError:
            out.append(None)
    return out


def aspect_oc_bound(aspects, k: int) -> float | None:
    """``k^2 log2(max_i asp(X^i))``: an upper bound on OC_k(X) for mixture data."""
    vals = [a for a in aspects if a is not None]
    if not vals or any(a is None for a in aspects):
        return None
    return k * k * math.log2(max(vals))


def scaling_envelope(n: int, k: int, c0: float) -> float:
    """``2 k^2 (3 log2 n + C0)``."""
    return 2.0 * k * k * (3.0 * math.log2(n) + c0)


def run_scaling(
    mixture: MixtureSpec,
    k: int,
    n_grid,
    seeds,
    online_config: OnlineConfig | None = None,
    oc_restarts: int = 1,
    contrast_alpha: float = 2.0,
    contrast_max_n: int = 256,
    label: str = "mixture",
) -> ScalingReport:
    """Aspect-ratio OC bound against sample size for one mixture.

    ``C0`` is the median over seeds of ``bound / k^2 - 3 log2 n`` at the
    smallest n. Each row is within the envelope when its bound is at most
    :func:`scaling_envelope`. With ``online_config`` the online algorithm is
    also run on every sample (slow for large n). Contrast rows run the
    exponential series at every grid size up to ``contrast_max_n``.
    """
    n_grid = [int(n) for n in n_grid]
    if n_grid != sorted(n_grid) or not n_grid:
        raise InvalidInputError("n grid must be non-empty and ascending")
    seeds = [int(s) for s in seeds]
    rows = []
    for n in n_grid:
        for seed in seeds:
            X = sample_mixture(mixture, n, seed)
            aspects = component_aspects(X)
            bound = aspect_oc_bound(aspects, k)
            row = {
                "source": label,
                "n": n,
                "seed": seed,
                "max_component_aspect": max((a for a in aspects if a is not None), default=None),
                "aspect_oc_bound": bound,
            }
            if bound is None:
                # degenerate components: OC is determined by the few distinct points
                est = oc_bracket(dedupe(X.points), k)
            else:
                est = oc_greedy_lower(X.points, k, restarts=oc_restarts, seed=seed)
            row["oc_lower"], row["oc_upper"] = est.lower, est.upper
            if online_config is not None:
                row["centers"] = run_online(X.points, online_config.with_seed(seed)).n_centers
            rows.append(row)
    base = [r["aspect_oc_bound"] for r in rows if r["n"] == n_grid[0] and r["aspect_oc_bound"] is not None]
    c0 = float(np.median([b / (k * k) - 3.0 * math.log2(n_grid[0]) for b in base])) if base else None
    within = []
    for r in rows:
        if c0 is None or r["aspect_oc_bound"] is None:
            r["envelope"], r["within"] = None, None
            continue
        env = scaling_envelope(r["n"], k, c0)
        r["envelope"], r["within"] = env, bool(r["aspect_oc_bound"] <= env)
        within.append(r["within"])
    contrast = []
    for n in n_grid:
        if n > contrast_max_n:
            break
        E = exponential_adversary(n, contrast_alpha)
        est = oc_bracket(E.points, k, restarts=1)
        contrast.append({"source": "exponential", "n": n, "seed": None, "oc_lower": est.lower, "oc_upper": est.upper})
    frac = float(np.mean(within)) if within else None
    return ScalingReport(k, n_grid, seeds, c0, rows, contrast, frac)
