import json
from pathlib import Path

import numpy as np
import pytest

from nosub import io as nio
from nosub.cli import main
from nosub.datagen import ComponentSpec, MixtureSpec, exponential_adversary
from nosub.errors import InvalidInputError
from nosub.harness import (
    ExperimentSpec,
    aggregate_rows,
    approx_bound,
    center_bound,
    component_aspects,
    run_experiment,
    run_scaling,
    worker_count,
)
from nosub.metric import Dataset
from nosub.offline import SolverSpec
from nosub.online import OnlineConfig

GOLDEN = Path(__file__).parent / "data" / "golden_trace_three_points.csv"

MIX = {
    "kind": "mixture",
    "n": 40,
    "seed": 5,
    "mixture": {
        "components": [
            {"kind": "gaussian", "location": [0.0], "scale": 1.0},
            {"kind": "gaussian", "location": [25.0], "scale": 1.0},
        ]
    },
}


class TestIO:
    def test_round_trip(self, tmp_path):
        X = Dataset(np.random.default_rng(0).normal(size=(7, 3)), labels=[0, 1, 0, 2, 1, 1, 0])
        nio.write_dataset_csv(X, tmp_path / "x.csv")
        Y = nio.read_dataset_csv(tmp_path / "x.csv")
        np.testing.assert_array_equal(X.points, Y.points)
        np.testing.assert_array_equal(X.labels, Y.labels)
        assert (tmp_path / "x.csv").read_text().splitlines()[0] == "x0,x1,x2,label"

    def test_ragged(self, tmp_path):
        (tmp_path / "r.csv").write_text("x0,x1\n1,2\n3\n")
        with pytest.raises(InvalidInputError):
            nio.read_dataset_csv(tmp_path / "r.csv")

    def test_bad_header(self, tmp_path):
        (tmp_path / "h.csv").write_text("a,b\n1,2\n")
        with pytest.raises(InvalidInputError):
            nio.read_dataset_csv(tmp_path / "h.csv")

    def test_non_numeric(self, tmp_path):
        (tmp_path / "n.csv").write_text("x0\n1\nfoo\n")
        with pytest.raises(InvalidInputError):
            nio.read_dataset_csv(tmp_path / "n.csv")

    def test_json_nonfinite(self):
        assert json.loads(nio.dumps({"a": float("inf"), "b": np.float64(2.0)})) == {"a": None, "b": 2.0}


class TestExperiment:
    def spec(self, **kw):
        cfg = OnlineConfig(2, SolverSpec("exact-1d-dp"))
        kw.setdefault("trials", 30)
        return ExperimentSpec(MIX, cfg, **kw)

    def test_rows_and_aggregates(self):
        rep = run_experiment(self.spec(base_seed=10))
        assert [r["seed"] for r in rep.rows] == list(range(10, 40))
        assert rep.aggregates == aggregate_rows(rep.rows)
        assert rep.oracle_cost is not None

    def test_bounds_are_formulas(self):
        rep = run_experiment(self.spec())
        assert rep.bounds["approx_rhs"] == approx_bound(2, 1.0, rep.oracle_cost)
        assert rep.bounds["approx_rhs"] == 1358 * 8 * rep.oracle_cost
        assert rep.bounds["center_rhs_upper"] == center_bound(2, rep.oc.upper, rep.n)

    def test_digest_stable(self):
        a = run_experiment(self.spec(checks=["sum-form"]))
        b = run_experiment(self.spec(checks=["sum-form"]))
        assert a.digest() == b.digest()
        assert a.digest() != run_experiment(self.spec(base_seed=1)).digest()

    def test_checks(self):
        rep = run_experiment(self.spec(checks=["approximation", "center-count", "sum-form"]))
        assert rep.passed, [c.detail for c in rep.checks]

    def test_lower_bound_check_fails_on_easy_data(self):
        X = Dataset(np.r_[np.zeros(200), np.full(200, 50.0)])
        rep = run_experiment(ExperimentSpec(X, OnlineConfig(2), trials=5, checks=["lower-bound"]))
        assert not rep.passed

    def test_unknown_check(self):
        with pytest.raises(InvalidInputError):
            self.spec(checks=["nonsense"])

    def test_thread_cap(self, monkeypatch):
        monkeypatch.setenv("NOSUB_THREADS", "1")
        assert worker_count() == 1
        monkeypatch.setenv("NOSUB_THREADS", "x")
        with pytest.raises(InvalidInputError):
            worker_count()

    def test_thread_count_does_not_change_report(self, monkeypatch):
        monkeypatch.setenv("NOSUB_THREADS", "1")
        a = run_experiment(self.spec()).digest()
        monkeypatch.setenv("NOSUB_THREADS", "3")
        assert run_experiment(self.spec()).digest() == a


class TestScaling:
    def test_degenerate_components(self):
        m = MixtureSpec([ComponentSpec("gaussian", [0.0], 1e-300), ComponentSpec("gaussian", [5.0], 1e-300)])
        rep = run_scaling(m, 2, [16], [0, 1])
        for row in rep.rows:
            assert row["aspect_oc_bound"] is None
            assert row["oc_lower"] == row["oc_upper"] == 2
        assert rep.fraction_within is None and not rep.passed

    def test_contrast_rows(self):
        m = MixtureSpec([ComponentSpec("gaussian", [0.0], 1.0), ComponentSpec("gaussian", [9.0], 1.0)])
        rep = run_scaling(m, 2, [32, 64], range(3))
        assert [(r["n"], r["oc_lower"], r["oc_upper"]) for r in rep.contrast] == [(32, 32, 32), (64, 64, 64)]
        assert rep.c0 is not None
        header = rep.to_csv().splitlines()[0].split(",")
        assert "aspect_oc_bound" in header and "envelope" in header

    def test_component_aspects(self):
        X = Dataset([0.0, 1.0, 4.0, 10.0, 10.0], labels=[0, 0, 0, 1, 1])
        assert component_aspects(X) == [4.0, None]

    def test_grid_ascending(self):
        m = MixtureSpec([ComponentSpec("gaussian", [0.0], 1.0)])
        with pytest.raises(InvalidInputError):
            run_scaling(m, 2, [128, 64], [0])


class TestCli:
    def test_golden_run(self, tmp_path, capsys):
        (tmp_path / "three.csv").write_text("x0\n0\n0.1\n100\n")
        out = tmp_path / "rep.json"
        code = main([
            "run", str(tmp_path / "three.csv"), "--k", "2", "--solver", "exact-enum",
            "--trials", "1", "--trace", "--out", str(out),
        ])
        assert code == 0
        assert (tmp_path / "rep.trace.csv").read_text() == GOLDEN.read_text()
        rep = json.loads(out.read_text())
        assert rep["rows"][0]["n_centers"] == 3
        assert (tmp_path / "rep.rows.csv").read_text().startswith("trial,seed,n_centers")

    def test_generate_then_oc(self, tmp_path, capsys):
        spec = tmp_path / "mix.json"
        spec.write_text(json.dumps({**MIX, "ordering": {"policy": "reverse-sorted"}}))
        assert main(["generate", str(spec), "--out", str(tmp_path / "m.csv")]) == 0
        assert "n=40 d=1 k_gen=2" in capsys.readouterr().out
        assert main(["oc", str(tmp_path / "m.csv"), "--k", "2"]) == 0
        assert "≤ OC ≤" in capsys.readouterr().out

    def test_oc_exact_exponential(self, tmp_path, capsys):
        nio.write_dataset_csv(exponential_adversary(10, 2.0), tmp_path / "e.csv")
        assert main(["oc", str(tmp_path / "e.csv"), "--k", "2", "--mode", "exact", "--json"]) == 0
        assert json.loads(capsys.readouterr().out)["lower"] == 10

    def test_lower_bound(self, capsys):
        assert main(["lower-bound", "--oc", "1024", "--k", "2", "--n", "1024", "--alpha", "1"]) == 0
        assert float(capsys.readouterr().out) == pytest.approx(115.2)

    def test_scaling(self, tmp_path, capsys):
        spec = tmp_path / "mix.json"
        spec.write_text(json.dumps(MIX))
        assert main(["scaling", str(spec), "--k", "2", "--n-grid", "32,64", "--trials", "2", "--check"]) == 0
        assert capsys.readouterr().out.startswith("source,n,seed")

    def test_exit_codes(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "missing.csv"), "--k", "2"]) == 2
        (tmp_path / "p.csv").write_text("x0,x1\n0,0\n1,1\n2,5\n")
        assert main(["run", str(tmp_path / "p.csv"), "--k", "2", "--solver", "exact-1d-dp"]) == 3
        assert main(["run", str(tmp_path / "p.csv"), "--k", "1", "--solver", "exact-enum"]) == 2
        X = Dataset(np.r_[np.zeros(100), np.full(100, 9.0)])
        nio.write_dataset_csv(X, tmp_path / "easy.csv")
        assert main(["run", str(tmp_path / "easy.csv"), "--k", "2", "--trials", "3", "--check", "lower-bound"]) == 4
        assert main(["lower-bound", "--k", "2", "--alpha", "1"]) == 2

    def test_selftest_subset(self, capsys):
        assert main(["selftest", "--only", "1,2"]) == 0
        assert capsys.readouterr().out.count("[PASS]") == 2

    def test_help_documents_columns(self, capsys):
        with pytest.raises(SystemExit):
            main(["run", "--help"])
        out = capsys.readouterr().out
        assert "t,offline_cost,v_t,s_t,p_t,selected,r_t,merged_cost" in out
