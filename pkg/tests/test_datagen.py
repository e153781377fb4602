import math

import numpy as np
import pytest

from nosub.datagen import (
    ComponentSpec,
    MixtureSpec,
    OrderingSpec,
    apply_ordering,
    exponential_adversary,
    hard_sequence_factor,
    make_hard_sequence,
    sample_mixture,
)
from nosub.errors import InvalidInputError
from nosub.metric import Dataset
from nosub.sequences import oc_exact, oc_greedy_lower, verify_alpha_k_sequence


def two_gaussians(weights=None):
    return MixtureSpec(
        [ComponentSpec("gaussian", [0.0, 0.0], 1.0), ComponentSpec("gaussian", [10.0, -5.0], 2.0)],
        weights,
    )


class TestMixture:
    def test_degenerate_scale(self):
        spec = MixtureSpec([ComponentSpec("gaussian", [3.0, -1.0], 1e-8)])
        X = sample_mixture(spec, 200, seed=0)
        assert np.max(np.abs(X.points - [3.0, -1.0])) < 1e-6

    def test_zero_weight(self):
        X = sample_mixture(two_gaussians([1.0, 0.0]), 100, seed=1)
        assert set(X.labels) == {0}

    def test_component_means(self):
        spec = two_gaussians()
        for seed in range(5):
            X = sample_mixture(spec, 2000, seed)
            for c, comp in enumerate(spec.components):
                pts = X.points[X.labels == c]
                se = comp.scales(2) / math.sqrt(len(pts))
                assert np.all(np.abs(pts.mean(axis=0) - comp.location) < 5 * se)

    def test_exponential_component(self):
        spec = MixtureSpec([ComponentSpec("exponential", [2.0], 3.0)])
        X = sample_mixture(spec, 4000, seed=2)
        assert X.points.min() >= 2.0
        assert X.points.mean() == pytest.approx(5.0, abs=5 * 3.0 / math.sqrt(4000))

    def test_uniform_box(self):
        spec = MixtureSpec([ComponentSpec("uniform-box", [1.0, 1.0], [0.5, 2.0])])
        X = sample_mixture(spec, 500, seed=3)
        assert np.all(np.abs(X.points[:, 0] - 1.0) <= 0.5)
        assert np.all(np.abs(X.points[:, 1] - 1.0) <= 2.0)

    def test_deterministic(self):
        a, b = sample_mixture(two_gaussians(), 50, 9), sample_mixture(two_gaussians(), 50, 9)
        np.testing.assert_array_equal(a.points, b.points)
        np.testing.assert_array_equal(a.labels, b.labels)

    def test_invalid(self):
        with pytest.raises(InvalidInputError):
            two_gaussians([0.6, 0.6])
        with pytest.raises(InvalidInputError):
            ComponentSpec("cauchy", [0.0])
        with pytest.raises(InvalidInputError):
            ComponentSpec("gaussian", [0.0], 0.0)
        with pytest.raises(InvalidInputError):
            MixtureSpec([ComponentSpec("gaussian", [0.0]), ComponentSpec("gaussian", [0.0, 1.0])])
        with pytest.raises(InvalidInputError):
            sample_mixture(two_gaussians(), 0)

    def test_json_round_trip(self):
        spec = two_gaussians([0.25, 0.75])
        spec.seed = 4
        again = MixtureSpec.from_dict(spec.to_dict())
        np.testing.assert_array_equal(sample_mixture(again, 30).points, sample_mixture(spec, 30).points)


class TestExponentialAdversary:
    def test_formula(self):
        assert list(exponential_adversary(3, 1.0).points[:, 0]) == [2.0, 4.0, 8.0]

    def test_full_sequence(self):
        X = exponential_adversary(25, 2.0)
        assert verify_alpha_k_sequence(X.points, range(25), 2.0, 2).accepted

    def test_single(self):
        assert exponential_adversary(1, 3.0).n == 1

    def test_overflow(self):
        exponential_adversary(498, 2.0)
        with pytest.raises(InvalidInputError):
            exponential_adversary(501, 2.0)

    def test_oc_is_n(self):
        for n in (3, 9, 13):
            assert oc_exact(exponential_adversary(n, 2.0).points, 2).lower == n
        assert oc_greedy_lower(exponential_adversary(300, 2.0).points, 2).lower == 300


class TestHardSequence:
    def test_verifies(self):
        for n, alpha, k in [(64, 10864.0, 2), (16, 4.0, 3), (40, 100.0, 2), (10, 1.0, 2)]:
            X = make_hard_sequence(n, alpha, k)
            factor = hard_sequence_factor(n, alpha)
            if factor > 1:
                assert verify_alpha_k_sequence(X.points, range(n), factor, k).accepted

    def test_two_points(self):
        X = make_hard_sequence(2, 10.0, 2)
        assert X.n == 2
        assert verify_alpha_k_sequence(X.points, [0, 1], hard_sequence_factor(2, 10.0), 2).accepted

    def test_ratio(self):
        X = make_hard_sequence(5, 4.0, 2).points[:, 0]
        np.testing.assert_allclose(X[1:] / X[:-1], math.sqrt(20.0))

    def test_invalid(self):
        with pytest.raises(InvalidInputError):
            make_hard_sequence(5, 4.0, 1)
        with pytest.raises(InvalidInputError):
            make_hard_sequence(5000, 1e6, 2)


class TestOrdering:
    X = Dataset([[2.0], [8.0], [4.0]], labels=[0, 1, 0])

    def test_identity(self):
        Y = apply_ordering(self.X, OrderingSpec("as-generated"))
        np.testing.assert_array_equal(Y.points, self.X.points)

    def test_reverse_sorted(self):
        Y = apply_ordering(Dataset([2.0, 4.0, 8.0]), OrderingSpec("reverse-sorted"))
        assert list(Y.points[:, 0]) == [8.0, 4.0, 2.0]

    def test_sorted_with_labels(self):
        Y = apply_ordering(self.X, OrderingSpec("sorted-by-norm"))
        assert list(Y.points[:, 0]) == [2.0, 4.0, 8.0] and list(Y.labels) == [0, 0, 1]

    def test_seeded_permutation(self):
        X = Dataset(np.arange(50.0))
        a = apply_ordering(X, OrderingSpec("uniform-random-permutation", 3))
        b = apply_ordering(X, OrderingSpec("uniform-random-permutation", 3))
        np.testing.assert_array_equal(a.points, b.points)
        assert sorted(a.points[:, 0]) == list(np.arange(50.0))

    def test_interleave(self):
        X = Dataset(np.arange(6.0), labels=[0, 0, 0, 1, 1, 2])
        Y = apply_ordering(X, OrderingSpec("interleave-components"))
        assert list(Y.labels) == [0, 1, 2, 0, 1, 0]

    def test_interleave_needs_labels(self):
        with pytest.raises(InvalidInputError):
            apply_ordering(Dataset([1.0, 2.0]), OrderingSpec("interleave-components"))

    def test_unknown_policy(self):
        with pytest.raises(InvalidInputError):
            OrderingSpec("zigzag")
