import itertools
import math

import numpy as np
import pytest

from nosub.datagen import exponential_adversary
from nosub.errors import InvalidInputError, UnsupportedInstanceError
from nosub.offline import SolverSpec
from nosub.online import OnlineConfig, run_online
from nosub.sequences import (
    SequenceCertificate,
    build_analysis_graph,
    chained_center_bound,
    conversion_length_bounds,
    extract_beta_subsequence,
    greedy_independent_set,
    lower_bound_centers,
    oc_bracket,
    oc_exact,
    oc_greedy_lower,
    oc_upper_bound_aspect,
    steps_per_factor,
    verify_alpha_k_sequence,
)


def powers(base, n):
    return base ** np.arange(1, n + 1, dtype=float)


class TestVerify:
    def test_two_points(self):
        v = verify_alpha_k_sequence([[0.0, 0.0], [1e-6, 0.0]], [0, 1], 2.0, 2)
        assert v.accepted and v.certified

    def test_reject_position(self):
        v = verify_alpha_k_sequence([0.0, 1.0, 1.5], [0, 1, 2], 2.0, 2)
        assert not v.accepted
        assert v.failed_at == 3
        assert v.certificate is None

    def test_exponential_series(self):
        v = verify_alpha_k_sequence(powers(4.0, 20), range(20), 2.0, 2)
        assert v.accepted and len(v.certificate) == 20
        assert all(m > 0 for m in v.certificate.margins)

    def test_equality_rejects(self):
        # 0, 1, then 3: distance 2 equals 2 * diam_1({0, 1})
        assert not verify_alpha_k_sequence([0.0, 1.0, 3.0], [0, 1, 2], 2.0, 2).accepted

    def test_repeat_rejects(self):
        assert not verify_alpha_k_sequence([0.0, 5.0], [0, 1, 0], 2.0, 3).accepted

    def test_bad_arguments(self):
        with pytest.raises(InvalidInputError):
            verify_alpha_k_sequence([0.0, 1.0], [0, 1], 1.0, 2)
        with pytest.raises(InvalidInputError):
            verify_alpha_k_sequence([0.0, 1.0], [0, 1], 2.0, 1)
        with pytest.raises(InvalidInputError):
            verify_alpha_k_sequence([0.0, 1.0], [0, 4], 2.0, 2)

    def test_approx_mode_never_over_accepts(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            X = rng.normal(size=(8, 2)) * 10 ** rng.uniform(0, 2, size=(8, 1))
            exact = verify_alpha_k_sequence(X, range(8), 2.0, 3, "exact")
            approx = verify_alpha_k_sequence(X, range(8), 2.0, 3, "approx")
            if approx.accepted:
                assert exact.accepted
            if not approx.accepted and not approx.certified:
                assert approx.sound_reject_only


class TestOcExact:
    def test_identical_points(self):
        assert oc_exact(np.zeros((6, 2)), 2).lower == 1

    def test_small_sets_reach_k_minus_one(self):
        rng = np.random.default_rng(1)
        for k in (2, 3, 4):
            X = rng.normal(size=(7, 2))
            assert oc_exact(X, k).lower >= min(7, k - 1)

    def test_exponential_series(self):
        est = oc_exact(powers(4.0, 10), 2)
        assert est.lower == est.upper == 10 and est.exact
        assert verify_alpha_k_sequence(powers(4.0, 10), est.witness, 2.0, 2).accepted

    def test_brute_force_agrees(self):
        rng = np.random.default_rng(2)
        for trial in range(6):
            X = rng.normal(size=6) * 10 ** rng.uniform(0, 2, size=6)
            k = 2 + trial % 2
            best = 1
            for m in range(2, 7):
                for perm in itertools.permutations(range(6), m):
                    if verify_alpha_k_sequence(X, perm, 2.0, k).accepted:
                        best = m
                        break
            assert oc_exact(X, k).lower == best

    def test_too_large(self):
        with pytest.raises(UnsupportedInstanceError):
            oc_exact(np.arange(16.0), 2)


class TestOcBounds:
    def test_greedy_identical(self):
        assert oc_greedy_lower(np.ones(10), 2).lower == 1

    def test_greedy_exponential(self):
        for n in (5, 30, 100):
            assert oc_greedy_lower(powers(4.0, n), 2).lower == n

    def test_aspect_pair(self):
        assert oc_upper_bound_aspect([0.0, 1.0], 2) == 3
        assert oc_upper_bound_aspect([0.0, 1.0], 5) == 6

    def test_aspect_exponential(self):
        X = powers(4.0, 8)
        assert oc_upper_bound_aspect(X, 2) >= 8
        assert oc_greedy_lower(X, 2).lower == 8
        assert oc_upper_bound_aspect(X, 2) == 27

    def test_aspect_overflow(self):
        # ratio 1 / 2.2e-309 overflows a float; the bound must stay finite
        X = np.array([[0.0], [1.0], [2.22507386e-309]])
        assert oc_upper_bound_aspect(X, 2) == 2 * (1025 + 1) + 1

    def test_aspect_underflow(self):
        # the squared distance underflows to 0 but the points are distinct
        assert oc_upper_bound_aspect([[0.0, 0.0], [0.0, 7e-243]], 2) == 3

    def test_aspect_identical(self):
        assert oc_upper_bound_aspect(np.zeros((4, 3)), 2) == 1

    def test_ordering_chain(self):
        rng = np.random.default_rng(3)
        for trial in range(15):
            n = int(rng.integers(3, 11))
            X = rng.normal(size=(n, 1 + trial % 2)) * 10 ** rng.uniform(0, 3, size=(n, 1))
            k = 2 + trial % 3
            lo = oc_greedy_lower(X, k, seed=trial).lower
            ex = oc_exact(X, k).lower
            assert lo <= ex <= oc_upper_bound_aspect(X, k)

    def test_bracket_dispatch(self):
        assert oc_bracket(powers(4.0, 12), 2).method == "exhaustive"
        big = oc_bracket(np.random.default_rng(4).normal(size=40), 2)
        assert big.lower <= big.upper <= 40
        assert str(big).endswith(f"({big.method})") and "≤ OC ≤" in str(big)


class TestConversion:
    def test_steps(self):
        assert steps_per_factor(2.0, 8.0) == 3
        assert steps_per_factor(2.0, 2.0) == 1
        assert steps_per_factor(4.0, 8.0) == 2
        assert steps_per_factor(2.0, 4.0) == 2

    def test_same_beta(self):
        X = powers(4.0, 12)
        cert = verify_alpha_k_sequence(X, range(12), 2.0, 2).certificate
        out = extract_beta_subsequence(X, cert, 2.0)
        assert len(out) >= 12 // 2
        assert verify_alpha_k_sequence(X, out.indices, 2.0, 2).accepted

    def test_beta_eight(self):
        X = powers(4.0, 12)
        cert = verify_alpha_k_sequence(X, range(12), 2.0, 2).certificate
        out = extract_beta_subsequence(X, cert, 8.0)
        assert verify_alpha_k_sequence(X, out.indices, 8.0, 2).accepted
        assert len(out) >= 2
        assert conversion_length_bounds(12, 2, 2.0, 8.0) == (2, 1)

    def test_short_input(self):
        X = powers(4.0, 3)
        cert = verify_alpha_k_sequence(X, range(3), 2.0, 3).certificate
        out = extract_beta_subsequence(X, cert, 64.0)
        assert len(out) >= 1

    def test_invalid_certificate(self):
        bogus = SequenceCertificate([0, 1, 2], 2.0, 2, [0.0, 0.0], True)
        with pytest.raises(InvalidInputError):
            extract_beta_subsequence([0.0, 1.0, 1.5], bogus, 4.0)


class TestLowerBound:
    def test_zero(self):
        assert lower_bound_centers(0, 2, 100, 4.0) == 0.0

    def test_reference_value(self):
        assert lower_bound_centers(1024, 2, 1024, 1.0) == pytest.approx(115.2)

    def test_floor_one(self):
        n, alpha, k = 1024, 1.0, 3
        steps = math.ceil(math.log2(0.5 * math.sqrt(n * alpha)))
        assert lower_bound_centers(k * steps, k, n, alpha) == pytest.approx(0.9)

    def test_factor_too_small(self):
        with pytest.raises(InvalidInputError):
            lower_bound_centers(5, 2, 4, 1.0)


class TestIndependentSet:
    def test_edgeless(self):
        assert greedy_independent_set([set() for _ in range(6)]) == list(range(6))

    def test_complete(self):
        m = 7
        adj = [set(range(m)) - {v} for v in range(m)]
        assert len(greedy_independent_set(adj)) == 1

    def test_path(self):
        adj = [{1}, {0, 2}, {1, 3}, {2, 4}, {3}]
        ind = greedy_independent_set(adj)
        assert len(ind) >= 2
        assert all(b not in adj[a] for a in ind for b in ind)

    def test_empty(self):
        assert greedy_independent_set([]) == []


class TestAnalysisGraph:
    def run(self, X, k=2, seed=0, solver="exact-1d-dp"):
        cfg = OnlineConfig(k, SolverSpec(solver), seed=seed, retain_clusterings=True)
        return run_online(X, cfg)

    def test_single_point(self):
        g = build_analysis_graph(self.run([3.0]), [3.0])
        assert g.n == 1 and g.adjacency() == [set()]
        assert g.independent_set == [0]

    def test_full_merge_has_empty_q(self):
        X = np.zeros(10)
        g = build_analysis_graph(self.run(X), X)
        assert g.q_sizes == [0] * 10

    def test_degree_bound_and_independence(self):
        X = exponential_adversary(12, 2.0).points
        run = self.run(X)
        g = build_analysis_graph(run, X)
        for t, (d, s) in enumerate(zip(g.out_degree, g.s)):
            assert d == g.p_sizes[t] + g.q_sizes[t]
            assert d <= 2 * s - 1
        adj = g.adjacency()
        assert all(b not in adj[a] for a in g.independent_set for b in g.independent_set)
        assert verify_alpha_k_sequence(X, g.independent_set, 2.0, 2).accepted
        assert chained_center_bound(g.s, 12) <= oc_exact(X, 2).lower

    def test_needs_retained_clusterings(self):
        run = run_online([0.0, 1.0], OnlineConfig(2, SolverSpec("exact-1d-dp")))
        with pytest.raises(InvalidInputError):
            build_analysis_graph(run, [0.0, 1.0])
