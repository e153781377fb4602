import json
import math
from pathlib import Path

import numpy as np
import pytest

from nosub.errors import InvalidInputError, UnsupportedInstanceError
from nosub.offline import SolverSpec
from nosub.online import (
    TRACE_COLUMNS,
    OnlineConfig,
    OnlineState,
    merge_index,
    merged_cost,
    plan_online,
    run_online,
    sampling_probability,
)

GOLDEN = Path(__file__).parent / "data" / "golden_trace_three_points.csv"
THREE = [0.0, 0.1, 100.0]


def exact_cfg(k=2, **kw):
    return OnlineConfig(k, SolverSpec("exact-enum"), **kw)


class TestConfig:
    def test_defaults(self):
        cfg = OnlineConfig(2)
        assert cfg.merge_budget == 100.0 and cfg.sample_scale == 20.0

    def test_k_one_rejected(self):
        with pytest.raises(InvalidInputError):
            OnlineConfig(1)

    def test_positive_constants(self):
        with pytest.raises(InvalidInputError):
            OnlineConfig(2, merge_budget=0.0)
        with pytest.raises(InvalidInputError):
            OnlineConfig(2, sample_scale=-1.0)

    def test_round_trip(self):
        cfg = OnlineConfig(3, SolverSpec.kmeanspp(3), seed=4)
        assert OnlineConfig.from_dict(cfg.to_dict()) == cfg


class TestMergeIndex:
    def test_single_cluster(self):
        assert merge_index([5], [[1.0]], 3.0) == 1

    def test_far_cluster_not_merged(self):
        # clusters ranked from x_t = 100: {100} then {0, 0.1}
        assert merge_index([1, 2], [[100.0], [0.05]], 0.005) == 1

    def test_identical_centers_merge(self):
        assert merge_index([3, 4], [[2.0, 2.0], [2.0, 2.0]], 1.0) == 2

    def test_zero_cost_identical_centers(self):
        assert merge_index([3, 4], [[2.0], [2.0]], 0.0) == 2


class TestMergedCost:
    def test_no_merge(self):
        prefix = np.array([[0.0], [0.1], [100.0]])
        ranked_assignment = np.array([1, 1, 0])
        centers = np.array([[100.0], [0.05]])
        assert merged_cost(prefix, ranked_assignment, centers, 1) == pytest.approx(0.005)

    def test_identical_centers(self):
        prefix = np.array([[0.0], [2.0], [0.0], [2.0]])
        assert merged_cost(prefix, np.array([0, 0, 1, 1]), np.array([[1.0], [1.0]]), 2) == 4.0

    def test_forced_merge_of_three_point_example(self):
        prefix = np.array([[0.0], [0.1], [100.0]])
        value = merged_cost(prefix, np.array([1, 1, 0]), np.array([[100.0], [0.05]]), 2)
        # only {100} moves, onto the center 0.05
        assert value == pytest.approx(0.005 + 99.95**2, rel=1e-12)

    def test_shift_expansion(self):
        rng = np.random.default_rng(0)
        cfg = OnlineConfig(3, SolverSpec("exact-1d-dp"), retain_clusterings=True)
        X = rng.normal(size=30) * 5
        for rec in plan_online(X, cfg):
            sizes = np.bincount(rec.ranked_assignment, minlength=rec.ell)
            C = rec.ranked_centers[:, 0]
            shift = sum(sizes[j] * (C[j] - C[rec.v_t - 1]) ** 2 for j in range(rec.v_t))
            assert rec.merged_cost == pytest.approx(rec.offline_cost + shift, rel=1e-9, abs=1e-12)


class TestStep:
    def test_first_step_selected(self):
        for k in (2, 3, 5):
            state = OnlineState(OnlineConfig(k, SolverSpec("exact-enum")))
            selected, rec = state.step([1.0, 2.0])
            assert rec.s_t == 1 and rec.p_t == 1.0 and selected
            assert math.isinf(rec.r_t)

    def test_identical_points(self):
        recs = plan_online(np.zeros(80), OnlineConfig(2, SolverSpec("exact-1d-dp")))
        for rec in recs:
            assert rec.offline_cost == 0.0
            assert rec.v_t == rec.ell
            assert rec.s_t == rec.t
            assert rec.p_t == pytest.approx(min(1.0, 40 * math.log(2) / rec.t))

    def test_three_point_example(self):
        rec = plan_online(THREE, exact_cfg())[-1]
        assert (rec.v_t, rec.s_t, rec.p_t) == (1, 1, 1.0)
        assert rec.r_t == pytest.approx(99.95)

    def test_state_matches_batch(self):
        X = np.random.default_rng(1).normal(size=(25, 2))
        cfg = OnlineConfig(2, SolverSpec.kmeanspp(2, seed=2), seed=7)
        state = OnlineState(cfg)
        decisions = [state.step(x)[0] for x in X]
        run = run_online(X, cfg)
        assert [i for i, d in enumerate(decisions) if d] == run.centers

    def test_unsupported_solver_propagates(self):
        with pytest.raises(UnsupportedInstanceError):
            run_online(np.zeros((3, 2)), OnlineConfig(2, SolverSpec("exact-1d-dp")))


class TestRun:
    def test_golden_trace(self):
        run = run_online(THREE, exact_cfg(seed=0))
        assert run.trace_csv() == GOLDEN.read_text()
        assert run.centers == [0, 1, 2] and run.final_cost == 0.0

    def test_small_n_takes_everything(self):
        for k in (2, 3):
            n = math.floor(20 * k * math.log(k))
            X = np.random.default_rng(k).normal(size=n)
            run = run_online(X, OnlineConfig(k, SolverSpec("exact-1d-dp"), seed=1))
            assert run.n_centers == n and run.final_cost == 0.0

    def test_expected_centers_is_sum_p(self):
        X = np.random.default_rng(2).normal(size=120)
        run = run_online(X, OnlineConfig(2, SolverSpec("exact-1d-dp")))
        assert run.expected_centers == pytest.approx(sum(r.p_t for r in run.trace))

    def test_replay_identical(self):
        X = np.random.default_rng(3).normal(size=90)
        cfg = OnlineConfig(2, SolverSpec("exact-1d-dp"), seed=42)
        a, b = run_online(X, cfg), run_online(X, cfg)
        assert a.centers == b.centers and a.trace_csv() == b.trace_csv()

    def test_schedule_reuse(self):
        X = np.random.default_rng(4).normal(size=90)
        cfg = OnlineConfig(2, SolverSpec("exact-1d-dp"))
        sched = plan_online(X, cfg)
        for seed in range(5):
            assert run_online(X, cfg.with_seed(seed), sched).centers == run_online(X, cfg.with_seed(seed)).centers

    def test_schedule_length_checked(self):
        cfg = exact_cfg()
        with pytest.raises(InvalidInputError):
            run_online([0.0, 1.0], cfg, plan_online([0.0], cfg))

    def test_json(self):
        run = run_online(THREE, exact_cfg())
        d = json.loads(run.to_json())
        assert d["trace"][0]["r_t"] is None
        assert set(TRACE_COLUMNS) <= set(d["trace"][0])
        assert "trace" not in run.to_dict(include_trace=False)


def test_sampling_probability_clamped():
    assert sampling_probability(1, 2) == 1.0
    assert sampling_probability(1000, 2) == pytest.approx(20 * 2 * math.log(2) / 1000)
