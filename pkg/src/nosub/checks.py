"""The ten acceptance checks, shared by the test-suite and ``nosub selftest``.

Each ``criterion_<i>`` function returns a :class:`CriterionResult`; a
criterion passes only when its property holds and it finishes inside its
time limit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .datagen import (
    ComponentSpec,
    MixtureSpec,
    exponential_adversary,
    hard_sequence_factor,
    make_hard_sequence,
    sample_mixture,
)
from .harness import ExperimentSpec, online_alpha, run_experiment, run_scaling
from .metric import (
    Dataset,
    RTOL,
    cost_with_center,
    exact_kmeans,
    good_points,
    leq,
    mean,
    one_means_cost,
    opt_kmeans_cost_oracle,
)
from .offline import SolverSpec
from .online import OnlineConfig, plan_online, run_online
from .sequences import (
    _greedy_in_order,
    build_analysis_graph,
    chained_center_bound,
    conversion_length_bounds,
    extract_beta_subsequence,
    oc_exact,
    verify_alpha_k_sequence,
)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed: float
    limit: float

    @property
    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] criterion {self.number:2d} {self.name}: {self.detail} ({self.elapsed:.2f}s / {self.limit:g}s)"


def _timed(number, name, limit, fn) -> CriterionResult:
    t0 = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - t0
    if elapsed >= limit:
        detail += f"; exceeded time limit {limit:g}s"
    return CriterionResult(number, name, bool(ok) and elapsed < limit, detail, elapsed, limit)


def _rel_close(a: float, b: float, rtol: float = RTOL) -> bool:
    return abs(a - b) <= rtol * max(abs(a), abs(b), 1e-300)


def _mixture_1d(locs, kind="gaussian", scale=1.0, weights=None) -> MixtureSpec:
    return MixtureSpec([ComponentSpec(kind, [float(m)], scale) for m in locs], weights)


# --------------------------------------------------------------------------


def criterion_1(instances: int = 1000, seed: int = 1) -> CriterionResult:
    """Center shifting: L(X, c) = L(X) + n |mean(X) - c|^2."""

    def body():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(instances):
            n, d = int(rng.integers(1, 51)), int(rng.integers(1, 6))
            scale = 10.0 ** rng.uniform(-3, 3)
            X = rng.normal(size=(n, d)) * scale
            c = rng.normal(size=d) * scale * rng.uniform(0, 5)
            lhs = cost_with_center(X, c)
            mu = mean(X)
            rhs = one_means_cost(X) + n * float(np.dot(mu - c, mu - c))
            if not _rel_close(lhs, rhs):
                return False, f"identity failed: {lhs!r} vs {rhs!r} (n={n}, d={d})"
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1e-300))
        return True, f"{instances} instances, worst relative gap {worst:.2e}"

    return _timed(1, "center-shifting identity", 1.0, body)


def criterion_2(sets: int = 500, seed: int = 2) -> CriterionResult:
    """At least half of any set are good points (more than half, as checked)."""

    def body():
        rng = np.random.default_rng(seed)
        worst = 1.0
        for _ in range(sets):
            n, d = int(rng.integers(1, 41)), int(rng.integers(1, 4))
            kind = rng.integers(3)
            if kind == 0:
                S = rng.normal(size=(n, d))
            elif kind == 1:
                S = rng.standard_cauchy(size=(n, d))
            else:
                S = rng.exponential(size=(n, d)) ** 3
            frac = len(good_points(S)) / n
            if not frac > 0.5:
                return False, f"only {frac:.3f} of a {n}-point set is good"
            worst = min(worst, frac)
        return True, f"{sets} sets, smallest good fraction {worst:.3f}"

    return _timed(2, "good-points lemma", 1.0, body)


def criterion_3(datasets: int = 100, seed: int = 3) -> CriterionResult:
    """Merged cost at most 101 L_k(prefix) at every step with an exact solver."""

    def body():
        rng = np.random.default_rng(seed)
        worst, steps = 0.0, 0
        for i in range(datasets):
            k = 2 + i % 2
            n = int(rng.integers(2, 201))
            comps = int(rng.integers(1, 5))
            x = rng.normal(size=n) + 10.0 * rng.integers(comps, size=n)
            x = x[rng.permutation(n)]
            sched = plan_online(x, OnlineConfig(k, SolverSpec("exact-1d-dp")))
            for rec in sched:
                opt = opt_kmeans_cost_oracle(x[: rec.t], k)
                if not leq(rec.merged_cost, 101.0 * opt):
                    return False, f"dataset {i} step {rec.t}: {rec.merged_cost!r} > 101 * {opt!r}"
                if opt > 0:
                    worst = max(worst, rec.merged_cost / opt)
                steps += 1
        return True, f"{steps} steps over {datasets} datasets, worst merged/opt {worst:.3f}"

    return _timed(3, "merged-cost bound", 30.0, body)


def approximation_datasets() -> list[tuple[Dataset, int]]:
    """The five fixed n = 500 one-dimensional mixtures of criterion 4."""
    specs = [
        (_mixture_1d([0.0, 30.0]), 2, 41),
        (_mixture_1d([0.0, 15.0, 40.0]), 3, 42),
        (_mixture_1d([0.0, 25.0], "uniform-box", 2.0), 2, 43),
        (_mixture_1d([0.0, 20.0, 60.0], "exponential", 1.5), 3, 44),
        (_mixture_1d([0.0, 10.0], "gaussian", 3.0, [0.7, 0.3]), 2, 45),
    ]
    return [(sample_mixture(m, 500, s), k) for m, k, s in specs]


def criterion_4(trials: int = 200) -> CriterionResult:
    """final_cost <= 1358 k^3 L_k(X) in at least 85% of trials on each dataset."""

    def body():
        parts, ok = [], True
        for j, (X, k) in enumerate(approximation_datasets()):
            spec = ExperimentSpec(X, OnlineConfig(k, SolverSpec("exact-1d-dp")), trials, base_seed=1000 * j,
                                  checks=["approximation"], oc_restarts=1)
            rep = run_experiment(spec)
            ok &= rep.passed
            frac = sum(r["cost_ratio"] <= online_alpha(k, 1.0) for r in rep.rows) / trials
            parts.append(f"d{j}:k={k} {frac:.3f}")
        return ok, "fraction within bound " + ", ".join(parts)

    return _timed(4, "approximation theorem", 300.0, body)


def center_count_datasets(count: int = 20, seed: int = 5) -> list[tuple[Dataset, int, str]]:
    """Small instances for criterion 5 with the solver each one needs."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        k = 2 + i % 2
        if i % 4 < 2:
            n = int(rng.integers(5, 16))
            x = rng.normal(size=n) * 10.0 ** rng.uniform(0, 2, size=n)
            out.append((Dataset(x), k, "exact-1d-dp"))
        else:
            n = int(rng.integers(5, 13))
            out.append((Dataset(rng.normal(size=(n, 2)) * 10.0 ** rng.uniform(0, 2, size=(n, 1))), k, "exact-enum"))
    return out


def criterion_5(trials: int = 100, exp_n: int = 40) -> CriterionResult:
    """Mean centers below the center-count bound, and matching sum_t p_t."""

    def body():
        cases = center_count_datasets()
        cases.append((exponential_adversary(exp_n, 2.0), 2, "exact-1d-dp"))
        worst_ratio, fails = 0.0, []
        for j, (X, k, solver) in enumerate(cases):
            spec = ExperimentSpec(X, OnlineConfig(k, SolverSpec(solver)), trials, base_seed=7000 + 100 * j,
                                  checks=["center-count", "sum-form"], oc_restarts=4)
            rep = run_experiment(spec)
            if j == len(cases) - 1 and not (rep.oc.exact and rep.oc.lower == exp_n):
                fails.append(f"exponential series OC bracket {rep.oc}")
            if not rep.oc.exact:
                fails.append(f"case {j}: OC not exact ({rep.oc})")
            for c in rep.checks:
                if not c.passed:
                    fails.append(f"case {j} {c.name}: {c.detail}")
            worst_ratio = max(worst_ratio, rep.aggregates["n_centers"]["mean"] / rep.bounds["center_rhs_lower"])
        if fails:
            return False, "; ".join(fails)
        return True, f"{len(cases)} datasets, largest mean/bound {worst_ratio:.4f}, sum-form within 5 SE"

    return _timed(5, "center-count theorem", 120.0, body)


def criterion_6(seeds: int = 20) -> CriterionResult:
    """Mixture aspect-ratio OC bound within 2 k^2 (3 log2 n + C0) for >= 95% of seeds."""

    def body():
        grid = [64, 128, 256, 512, 1024]
        mixes = {
            "gaussian": _mixture_1d([0.0, 20.0]),
            "uniform": _mixture_1d([0.0, 20.0], "uniform-box", 1.0),
        }
        ok, parts = True, []
        for name, m in mixes.items():
            rep = run_scaling(m, 2, grid, range(seeds), label=name)
            contrast_ok = all(r["oc_lower"] == r["n"] == r["oc_upper"] for r in rep.contrast)
            ok &= rep.passed and contrast_ok
            parts.append(f"{name}: C0={rep.c0:.2f}, within {rep.fraction_within:.2f}, contrast OC=n {contrast_ok}")
        return ok, "; ".join(parts)

    return _timed(6, "mixture scaling", 120.0, body)


def criterion_7(n: int = 64, k: int = 2, seeds: int = 100) -> CriterionResult:
    """The online algorithm takes at least 0.9 n points of a hard sequence."""

    def body():
        alpha = online_alpha(k, 1.0)
        X = make_hard_sequence(n, alpha, k)
        factor = hard_sequence_factor(n, alpha)
        if not verify_alpha_k_sequence(X.points, range(n), factor, k).accepted:
            return False, "hard sequence does not verify"
        rep = run_experiment(ExperimentSpec(X, OnlineConfig(k, SolverSpec("exact-1d-dp")), seeds,
                                            checks=["lower-bound"], oc_restarts=1))
        frac = rep.aggregates["n_centers"]["mean"] / n
        return rep.passed, f"alpha={alpha:g}, factor {factor:.1f}, mean fraction selected {frac:.3f}"

    return _timed(7, "adversarial necessity", 60.0, body)


def alpha_k_sequence(n: int, alpha: float, k: int, dim: int, rng) -> np.ndarray:
    """Random points with geometrically growing norms, an (alpha, k)-sequence by construction.

    Each radius exceeds the previous by a factor above 2 alpha + 1, so the new
    point is farther from every predecessor than alpha times the whole prefix
    diameter.
    """
    ratios = rng.uniform(2 * alpha + 1.5, 3 * alpha + 3, size=n)
    radii = np.cumprod(ratios)
    dirs = rng.normal(size=(n, dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return radii[:, None] * dirs


def criterion_8(count: int = 100, seed: int = 8) -> CriterionResult:
    """Extracted (beta, k)-sub-sequences verify and meet the length floor."""

    def body():
        rng = np.random.default_rng(seed)
        checked = 0
        for i in range(count):
            alpha = (2.0, 4.0)[i % 2]
            k = 2 + (i // 2) % 2
            n = int(rng.integers(2, 65))
            X = alpha_k_sequence(n, alpha, k, 1 + i % 3, rng)
            cert = verify_alpha_k_sequence(X, range(n), alpha, k).certificate
            if cert is None:
                return False, f"generated sequence {i} is not an ({alpha}, {k})-sequence"
            for beta in (alpha, alpha * alpha, 8.0):
                out = extract_beta_subsequence(X, cert, beta)
                floor_c, floor_s = conversion_length_bounds(n, k, alpha, beta)
                if not verify_alpha_k_sequence(X, out.indices, beta, k).accepted:
                    return False, f"sequence {i}, beta={beta}: output does not verify"
                if len(out) < max(floor_c, floor_s):
                    return False, f"sequence {i}, beta={beta}: length {len(out)} < floor {max(floor_c, floor_s)}"
                checked += 1
        return True, f"{checked} conversions verified at their floors"

    return _timed(8, "sequence conversion", 10.0, body)


def criterion_9(runs: int = 50, seed: int = 9, extra_orders: int = 8) -> CriterionResult:
    """Analysis graph: independent sets are (2, k)-sequences, degree and chained bounds hold."""

    def body():
        rng = np.random.default_rng(seed)
        sets_checked = 0
        worst = 0.0
        for i in range(runs):
            k = 2 + i % 2
            if i % 2 == 0:
                n = int(rng.integers(3, 16))
                X = rng.normal(size=n) * 10.0 ** rng.uniform(0, 2, size=n)
                solver = "exact-1d-dp"
            else:
                n = int(rng.integers(3, 13))
                X = rng.normal(size=(n, 2)) * 10.0 ** rng.uniform(0, 1.5, size=(n, 1))
                solver = "exact-enum"
            cfg = OnlineConfig(k, SolverSpec(solver), seed=i, retain_clusterings=True)
            run = run_online(X, cfg)
            g = build_analysis_graph(run, X, seed=i)
            for t, (deg, s) in enumerate(zip(g.out_degree, g.s), start=1):
                if deg > 2 * s - 1:
                    return False, f"run {i} step {t}: out-degree {deg} > 2 s_t - 1 = {2 * s - 1}"
            adj = g.adjacency()
            candidates = [g.independent_set]
            candidates += [sorted(_greedy_in_order(adj, rng.permutation(n))) for _ in range(extra_orders)]
            for ind in candidates:
                if not verify_alpha_k_sequence(X, ind, 2.0, k, diam_mode="exact").accepted:
                    return False, f"run {i}: independent set {ind} is not a (2, {k})-sequence"
                sets_checked += 1
            oc = oc_exact(X, k).lower
            lb = chained_center_bound(g.s, n)
            if not lb <= oc:
                return False, f"run {i}: sum 1/s_t / (8 (log2 n + 1)) = {lb:.4f} > OC = {oc}"
            worst = max(worst, lb / oc)
        return True, f"{runs} runs, {sets_checked} independent sets verified, largest chained/OC {worst:.3f}"

    return _timed(9, "analysis-graph diagnostics", 60.0, body)


def criterion_10(instances: int = 200, seed: int = 10) -> CriterionResult:
    """1-D dynamic programming and full enumeration give identical optimal costs."""

    def body():
        rng = np.random.default_rng(seed)
        for i in range(instances):
            n = 1 + i % 12
            k = 1 + (i // 12) % 4
            if i % 5 == 4:
                x = rng.integers(0, 4, size=n).astype(float)  # ties and duplicates
            else:
                x = rng.normal(size=n) * 10.0 ** rng.uniform(-2, 2)
            a = exact_kmeans(x, k, "enum").total_cost
            b = exact_kmeans(x, k, "dp").total_cost
            if a != b:
                return False, f"instance {i} (n={n}, k={k}): enum {a!r} != dp {b!r}"
        return True, f"{instances} instances, enum == dp bit-for-bit"

    return _timed(10, "oracle agreement", 30.0, body)


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}


def run_all(numbers=None, echo=None) -> list[CriterionResult]:
    results = []
    for i in numbers or sorted(CRITERIA):
        res = CRITERIA[i]()
        if echo is not None:
            echo(res.line)
        results.append(res)
    return results

