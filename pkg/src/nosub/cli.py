"""Command-line front end: ``nosub <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 unsupported instance, 4 a
requested check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io as nio
from .datagen import ORDERING_POLICIES, MixtureSpec, OrderingSpec
from .errors import InvalidInputError, UnsupportedInstanceError
from .harness import (
    CHECK_NAMES,
    ROW_COLUMNS,
    SCALING_COLUMNS,
    ExperimentSpec,
    generate,
    load_source,
    run_experiment,
    run_scaling,
)
from .offline import SolverSpec
from .online import TRACE_COLUMNS, OnlineConfig
from .sequences import lower_bound_centers, oc_bracket, oc_exact, oc_greedy_lower

EXIT_OK, EXIT_INVALID, EXIT_UNSUPPORTED, EXIT_CHECK = 0, 2, 3, 4
SOLVER_CHOICES = ("exact-enum", "exact-1d-dp", "kmeanspp")


def solver_spec(name: str, k: int, seed: int) -> SolverSpec:
    if name == "kmeanspp":
        return SolverSpec.kmeanspp(k, seed=seed)
    return SolverSpec(name)


def _dataset(arg: str):
    """A CSV path, or a JSON generator spec (file ending in .json)."""
    if arg.endswith(".json"):
        return generate(nio.read_json(arg))
    return load_source(arg)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    spec = nio.read_json(args.spec)
    X = generate(spec)
    nio.write_dataset_csv(X, args.out)
    k_gen = len(spec["mixture"]["components"]) if spec.get("kind") == "mixture" else 1
    print(f"n={X.n} d={X.dim} k_gen={k_gen} -> {args.out}")
    return EXIT_OK


def cmd_run(args) -> int:
    X = _dataset(args.dataset)
    cfg = OnlineConfig(args.k, solver_spec(args.solver, args.k, args.seed), record_trace=args.trace)
    spec = ExperimentSpec(
        X,
        cfg,
        trials=args.trials,
        base_seed=args.seed,
        ordering=OrderingSpec(args.ordering, args.seed),
        checks=args.check or [],
    )
    report = run_experiment(spec, keep_runs=args.trace)
    if args.out:
        out = Path(args.out)
        nio.write_json(report.to_dict(), out)
        out.with_suffix(".rows.csv").write_text(report.rows_csv())
        if args.trace:
            out.with_suffix(".trace.csv").write_text(report.runs[0].trace_csv())
    else:
        sys.stdout.write(report.rows_csv())
        if args.trace:
            sys.stdout.write(report.runs[0].trace_csv())
    agg = report.aggregates
    print(
        f"n={report.n} k={report.k} trials={args.trials} mean_centers={agg['n_centers']['mean']:.4g} "
        f"oc={report.oc} digest={report.digest()[:16]}",
        file=sys.stderr,
    )
    for c in report.checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_oc(args) -> int:
    X = _dataset(args.dataset)
    if args.mode == "exact":
        est = oc_exact(X.points, args.k)
    elif args.mode == "greedy":
        est = oc_greedy_lower(X.points, args.k, args.restarts, args.seed)
    else:
        est = oc_bracket(X.points, args.k, args.restarts, args.seed)
    if args.json:
        print(nio.dumps(est.to_dict()))
    else:
        print(est)
        print("witness:", " ".join(str(i) for i in est.witness))
    return EXIT_OK


def cmd_lower_bound(args) -> int:
    if (args.dataset is None) == (args.oc is None):
        raise InvalidInputError("give exactly one of --dataset or --oc")
    if args.dataset is not None:
        X = _dataset(args.dataset)
        oc = oc_bracket(X.points, args.k, args.restarts, args.seed).lower  # conservative end
        n = X.n if args.n is None else args.n
    else:
        oc, n = args.oc, args.n
        if n is None:
            raise InvalidInputError("--n is required with --oc")
    print(repr(lower_bound_centers(oc, args.k, n, args.alpha)))
    return EXIT_OK


def cmd_scaling(args) -> int:
    spec = nio.read_json(args.mixture)
    mixture = MixtureSpec.from_dict(spec.get("mixture", spec))
    online = None
    if args.online:
        online = OnlineConfig(args.k, solver_spec(args.solver, args.k, args.seed), record_trace=False)
    grid = [int(v) for v in args.n_grid.split(",")]
    rep = run_scaling(mixture, args.k, grid, range(args.seed, args.seed + args.trials), online)
    _emit(rep.to_csv(), args.out)
    frac = "n/a" if rep.fraction_within is None else f"{rep.fraction_within:.3f}"
    print(f"C0={rep.c0} fraction_within={frac}", file=sys.stderr)
    return EXIT_OK if rep.passed or not args.check else EXIT_CHECK


def cmd_selftest(args) -> int:
    from .checks import run_all

    numbers = [int(v) for v in args.only.split(",")] if args.only else None
    results = run_all(numbers, echo=print)
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


RUN_EPILOG = (
    "rows CSV columns: " + ",".join(ROW_COLUMNS) + "\n"
    "trace CSV columns: " + ",".join(TRACE_COLUMNS) + "\n"
    "trial i uses seed --seed + i; r_t is inf (null in JSON) when every cluster merged.\n"
    "checks: " + ", ".join(CHECK_NAMES)
)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nosub", description="Online no-substitution k-means toolkit.")
    sub = p.add_subparsers(dest="command", required=True)
    fmt = argparse.RawDescriptionHelpFormatter

    g = sub.add_parser("generate", help="write a dataset CSV from a generator spec")
    g.add_argument("spec", help="JSON generator spec (kind: mixture | exponential | hard, optional ordering)")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="seeded trials of the online algorithm", epilog=RUN_EPILOG, formatter_class=fmt)
    r.add_argument("dataset", help="dataset CSV or JSON generator spec")
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--trials", type=int, default=1)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--solver", choices=SOLVER_CHOICES, default="exact-1d-dp")
    r.add_argument("--ordering", choices=ORDERING_POLICIES, default="as-generated")
    r.add_argument("--check", action="append", choices=CHECK_NAMES, help="repeatable")
    r.add_argument("--out", help="report JSON path; rows and trace CSVs are written alongside")
    r.add_argument("--trace", action="store_true", help="also write the first trial's step trace")
    r.set_defaults(func=cmd_run)

    o = sub.add_parser("oc", help="bracket OC_k of a dataset")
    o.add_argument("dataset")
    o.add_argument("--k", type=int, required=True)
    o.add_argument("--mode", choices=("auto", "exact", "greedy"), default="auto")
    o.add_argument("--restarts", type=int, default=8)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--json", action="store_true")
    o.set_defaults(func=cmd_oc)

    lb = sub.add_parser("lower-bound", help="centers forced on a worst-case ordering")
    lb.add_argument("--dataset")
    lb.add_argument("--oc", type=int)
    lb.add_argument("--k", type=int, required=True)
    lb.add_argument("--n", type=int)
    lb.add_argument("--alpha", type=float, required=True)
    lb.add_argument("--restarts", type=int, default=8)
    lb.add_argument("--seed", type=int, default=0)
    lb.set_defaults(func=cmd_lower_bound)

    s = sub.add_parser(
        "scaling",
        help="aspect-ratio OC bound against n for a mixture",
        epilog="CSV columns: " + ",".join(SCALING_COLUMNS),
        formatter_class=fmt,
    )
    s.add_argument("mixture", help="JSON mixture spec (or generator spec with a mixture entry)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n-grid", default="64,128,256,512,1024")
    s.add_argument("--trials", type=int, default=20, help="seeds per grid point")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--solver", choices=SOLVER_CHOICES, default="exact-1d-dp")
    s.add_argument("--online", action="store_true", help="also run the online algorithm (slow)")
    s.add_argument("--check", action="store_true", help="exit 4 unless >= 95%% of seeds are within the envelope")
    s.add_argument("--out")
    s.set_defaults(func=cmd_scaling)

    st = sub.add_parser("selftest", help="run the acceptance checks")
    st.add_argument("--only", help="comma-separated criterion numbers")
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedInstanceError as exc:
        print(f"unsupported instance: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (InvalidInputError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
